#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vsms/integral.hpp"

namespace vsms {

enum class Mode {
    VerifyAxioms,
    CheckContraction,
    SolveThreeMap,
    SolveTwoMap,
    SolveIntegral,
    WeakCompat,
    Uniqueness,
};

std::string_view mode_name(Mode m);

/// a*x + b on the carrier.
struct AffineMap {
    double a = 1.0;
    double b = 0.0;

    double operator()(double x) const { return a * x + b; }
};

/// A validated run description parsed from a scenario document.
///
/// The document is a flat key/value format with [section] headers, one
/// `key = value` pair per line, and `#` comments. Sections: top level
/// (id, mode, seed), [lattice], [carrier], [metric], [maps],
/// [coefficients], [solver]. See the README for the full grammar.
struct Scenario {
    std::string id;
    Mode mode = Mode::VerifyAxioms;
    std::uint64_t seed = 0;

    OrderKind lattice_kind = OrderKind::Scalar;
    std::size_t lattice_dim = 1;

    bool carrier_is_interval = true;
    double carrier_lo = 0.0;
    double carrier_hi = 1.0;
    std::vector<double> carrier_points;
    CarrierSpace::Sampling carrier_sampling = CarrierSpace::Sampling::UniformRandom;
    std::size_t carrier_grid_points = 64;

    std::string metric_name = "sum_abs";
    std::string metric_base = "sum_abs"; // for max_of

    std::optional<AffineMap> map_p;
    std::optional<AffineMap> map_q;
    std::optional<AffineMap> map_k;

    std::optional<ContractionCoefficients> coefficients;

    std::vector<double> starts;
    std::string gauge_name = "one";
    std::size_t quadrature_panels = default_quadrature_panels;
    std::size_t sample_budget = 10'000;
    std::size_t max_iter = default_max_iter;
    double tol = default_tol;
    double tau_eq = default_tau_eq;
    MapPair wc_pair = MapPair::PK;
};

/// Parse and validate a scenario document. Throws ParseError naming the
/// first offending field (unknown mode, unresolvable map or metric name,
/// infeasible coefficients with the computed weighted sum, carrier
/// escape of an affine map, ...).
Scenario parse_scenario(const std::string& text);
Scenario parse_scenario_file(const std::filesystem::path& path);

/// Assemble the pieces a scenario describes; shared by run() and tests.
LatticeSpace build_lattice(const Scenario& s);
CarrierSpace build_carrier(const Scenario& s);
VectorSMetric build_metric(const Scenario& s);
MapSystem build_map_system(const Scenario& s);

/// Outcome of one scenario run. The JSON payload contains only
/// deterministic fields, so identical scenario + seed reproduce it byte
/// for byte; wall time is reported separately.
struct RunResult {
    std::string id;
    Mode mode = Mode::VerifyAxioms;
    std::string verdict;
    std::optional<double> limit;
    std::optional<std::string> counterexample; // rendered witness, JSON fragment
    std::optional<std::string> trace_path;
    std::size_t iterations = 0;
    double wall_seconds = 0.0;
    int exit_code = 0; // 0 pass/converged, 2 hypothesis violation

    std::string payload_json() const;
};

/// Dispatch the scenario to the matching module operation. Solver modes
/// write their trace CSV into out_dir (file name derived from the
/// scenario id). Module errors propagate; callers map them to exit 3.
RunResult run(const Scenario& s, const std::filesystem::path& out_dir);

/// Names addressable from scenario files.
std::vector<std::string> metric_catalog();
std::vector<std::string> map_catalog();
std::vector<std::string> gauge_catalog();
std::vector<std::string> mode_catalog();

} // namespace vsms

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vsms/contraction.hpp"
#include "vsms/smetric.hpp"

namespace vsms {

inline constexpr double default_tol = 1e-9;
inline constexpr std::size_t default_max_iter = 10'000;

/// Three self-maps p, q, k on one carrier plus a preimage oracle for k.
///
/// When no oracle is supplied, interval carriers synthesize one by
/// bisection (k must be strictly monotone on the probe grid; detected at
/// construction) and finite carriers scan their points. A value of p or q
/// with no k-preimage within tolerance raises RangeContainmentError.
class MapSystem {
public:
    MapSystem(CarrierSpace carrier, CarrierMap p, CarrierMap q, CarrierMap k,
              std::optional<CarrierMap> k_preimage = std::nullopt);

    /// Two-map system: q is p.
    static MapSystem two_map(CarrierSpace carrier, CarrierMap p, CarrierMap k,
                             std::optional<CarrierMap> k_preimage = std::nullopt);

    const CarrierSpace& carrier() const { return carrier_; }

    /// Map applications, checked to stay inside the carrier.
    double p(double x) const { return apply(p_, "p", x); }
    double q(double x) const { return apply(q_, "q", x); }
    double k(double x) const { return apply(k_, "k", x); }

    /// A point w with k(w) = y within tau.
    double k_preimage(double y, double tau = default_tau_eq) const;

private:
    double apply(const CarrierMap& f, const char* name, double x) const;
    double bisect_preimage(double y, double tau) const;

    CarrierSpace carrier_;
    CarrierMap p_, q_, k_;
    std::optional<CarrierMap> preimage_;
    bool k_increasing_ = true;
};

struct RangeContainmentReport {
    bool ok = true;
    std::optional<double> orphan; // p/q output with no k-preimage
    std::string detail;

    explicit operator bool() const { return ok; }
};

/// Sampled check that every p/q output admits a k-preimage.
RangeContainmentReport verify_range_containment(const MapSystem& maps,
                                                std::size_t sample_budget,
                                                std::uint64_t seed,
                                                double tau = default_tau_eq);

/// Sanity probe for continuity on interval carriers: at sampled base
/// points, |f(x') - f(x)| must shrink with |x' - x|. Catches gross
/// violations (jumps); it cannot certify continuity. Finite carriers
/// return true.
bool continuity_probe(const CarrierMap& f, const CarrierSpace& carrier,
                      std::size_t sample_pairs = 100, std::uint64_t seed = 0);

/// Monotone scalar surrogate for order-smallness of lattice values:
/// gauge(0) = 0, x <= y in V+ implies gauge(x) <= gauge(y), and a zero
/// gauge pins the element to 0 within tolerance.
class Gauge {
public:
    Gauge() : Gauge(max_abs()) {}
    Gauge(std::string name, std::function<double(const LatticeElement&)> rule);

    /// Largest absolute coordinate; the default.
    static Gauge max_abs();

    double operator()(const LatticeElement& x) const { return rule_(x); }
    const std::string& name() const { return name_; }

private:
    std::string name_;
    std::function<double(const LatticeElement&)> rule_;
};

enum class Verdict { Converged, BudgetExhausted, RateViolation };

std::string_view verdict_name(Verdict v);

/// Record of one alternating-iteration run.
///
/// gamma[b] = k(xi[b]); residuals[b] measures S(gamma[b], gamma[b],
/// gamma[b+1]); bounds[b] = rate^b * residuals[0] is the dominating
/// sequence that witnesses V-Cauchy behavior (it decreases to 0 whenever
/// rate < 1), so a converged trace certifies the convergence definition
/// empirically.
struct ConvergenceTrace {
    std::vector<double> xi;
    std::vector<double> gamma;
    std::vector<double> residuals;
    std::vector<double> bounds;
    double rate = 0.0;
    Verdict verdict = Verdict::BudgetExhausted;
    std::optional<double> limit;

    std::size_t iterations() const { return residuals.size(); }
};

/// Fixed-schema CSV: iteration,xi,gamma,residual,bound,verdict with one
/// row per iterate, a mandatory header, and 17 significant digits so
/// reruns round-trip exactly.
void write_trace_csv(const ConvergenceTrace& trace, std::ostream& out);
void write_trace_csv(const ConvergenceTrace& trace, const std::filesystem::path& path);

namespace detail {

/// Engine shared by the plain and integral solvers: alternate
/// xi[b+1] = k_preimage(p-or-q(xi[b])), record gamma[b] = k(xi[b]) and
/// the residual functional of S(gamma[b], gamma[b], gamma[b+1]), stop on
/// residual < tol, budget exhaustion, or five consecutive over-rate steps.
ConvergenceTrace alternating_iteration(
    const VectorSMetric& metric, const MapSystem& maps, bool alternate_q,
    const std::function<double(const LatticeElement&)>& residual, double rate, double x0,
    std::size_t max_iter, double tol, double tau);

} // namespace detail

/// The three-map iteration: xi[2b+1] = k_preimage(p(xi[2b])),
/// xi[2b+2] = k_preimage(q(xi[2b+1])), residuals gauged by g, dominated
/// geometrically at coeff.rate(). q = p reproduces the two-map scheme.
ConvergenceTrace iterate(const VectorSMetric& metric, const MapSystem& maps,
                         const ContractionCoefficients& coeff, double x0, const Gauge& g,
                         std::size_t max_iter = default_max_iter, double tol = default_tol,
                         double tau = default_tau_eq);

struct CoincidenceReport {
    double omega = 0.0;   // k-preimage of the limit
    double p_gauge = 0.0; // gauge of S(p(omega), p(omega), limit)
    double q_gauge = 0.0;
    bool confirmed = false;
};

/// Locate omega with k(omega) = limit and measure how far p(omega) and
/// q(omega) sit from the limit; both below tol confirms the limit as a
/// shared value of the map pairs.
CoincidenceReport point_of_coincidence(const VectorSMetric& metric, const MapSystem& maps,
                                       const ConvergenceTrace& trace, double tol,
                                       const Gauge& g = Gauge::max_abs(),
                                       double tau = default_tau_eq);

enum class MapPair { PK, QK };

struct WeakCompatReport {
    bool compatible = true;
    std::optional<double> violation_point;
    std::vector<double> coincidence_points;

    explicit operator bool() const { return compatible; }
};

/// Weak compatibility of a pair (f, k): wherever f and k agree (found by
/// dense sampling plus bisection refinement on sign changes of f - k),
/// their compositions must agree within tol.
WeakCompatReport weak_compatibility_check(const MapSystem& maps, MapPair pair,
                                          std::size_t sample_budget, std::uint64_t seed,
                                          double tol);

struct UniquenessReport {
    enum class Outcome { Unique, Divergent, Inconclusive };

    Outcome outcome = Outcome::Inconclusive;
    std::optional<double> limit;                        // Unique
    std::optional<std::pair<double, double>> divergent; // Divergent
    std::vector<ConvergenceTrace> runs;

    bool unique() const { return outcome == Outcome::Unique; }
};

/// Run the iteration from several starts; limits must agree within tol
/// (gauge of S between them). Any non-converged run is Inconclusive.
UniquenessReport uniqueness_probe(const VectorSMetric& metric, const MapSystem& maps,
                                  const ContractionCoefficients& coeff, const Gauge& g,
                                  std::span<const double> starts,
                                  std::size_t max_iter = default_max_iter,
                                  double tol = default_tol, double tau = default_tau_eq);

} // namespace vsms

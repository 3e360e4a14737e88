#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vsms/lattice.hpp"
#include "vsms/sampling.hpp"

namespace vsms {

/// A self-map of the carrier set.
using CarrierMap = std::function<double(double)>;

/// The nonvoid set the metric is defined on: a real interval or a finite
/// point set. The sampling policy controls how verification sweeps draw
/// points: continuous uniform, or uniform over a fixed grid.
class CarrierSpace {
public:
    enum class Sampling { UniformRandom, Grid };

    static CarrierSpace interval(double lo, double hi,
                                 Sampling sampling = Sampling::UniformRandom,
                                 std::size_t grid_points = 64);
    static CarrierSpace finite(std::vector<double> points);

    bool is_interval() const { return std::holds_alternative<Interval>(body_); }
    double lo() const;
    double hi() const;
    const std::vector<double>& points() const;
    Sampling sampling() const { return sampling_; }

    bool contains(double x, double slack = 0.0) const;
    void require_contains(double x, const char* what) const;

    /// One point per the sampling policy.
    double sample(SampleStream& stream) const;
    /// Shrink target for counterexample minimization.
    double midpoint() const;
    /// Finite carriers small enough for exhaustive axiom sweeps.
    bool exhaustible(std::size_t limit = 32) const;

    std::string describe() const;

private:
    struct Interval {
        double lo, hi;
        std::size_t grid_points;
    };
    struct FiniteSet {
        std::vector<double> points;
    };

    CarrierSpace(Interval iv, Sampling s) : body_(iv), sampling_(s) {}
    explicit CarrierSpace(FiniteSet fs) : body_(std::move(fs)), sampling_(Sampling::Grid) {}

    std::variant<Interval, FiniteSet> body_;
    Sampling sampling_;
};

/// A ternary map carrier^3 -> V intended to satisfy the vector S-metric
/// axioms: nonnegativity, zero exactly on the diagonal, and the
/// tetrahedral inequality S(x,y,z) <= S(x,x,a)+S(y,y,a)+S(z,z,a).
/// Immutable; eval is pure.
class VectorSMetric {
public:
    using Rule = std::function<LatticeElement(double, double, double)>;

    VectorSMetric(std::string name, CarrierSpace carrier, LatticeSpace target, Rule rule);

    const std::string& name() const { return name_; }
    const CarrierSpace& carrier() const { return carrier_; }
    const LatticeSpace& target() const { return target_; }

    /// Evaluate the rule; arguments must lie in the carrier.
    LatticeElement eval(double x, double y, double z) const;

private:
    std::string name_;
    CarrierSpace carrier_;
    LatticeSpace target_;
    Rule rule_;
};

/// Sum of pairwise absolute differences |x-y|+|y-z|+|z-x|, lifted to the
/// target space by uniform replication (scalar target by default).
VectorSMetric sum_abs_metric(CarrierSpace carrier,
                             LatticeSpace target = LatticeSpace::scalar());

/// Largest pairwise absolute difference, lifted like sum_abs_metric. A
/// second independent construction, handy for multi-channel metrics.
VectorSMetric max_abs_metric(CarrierSpace carrier,
                             LatticeSpace target = LatticeSpace::scalar());

/// Join of the three cyclic base values S(x,x,y), S(y,y,z), S(z,z,x).
/// Produces a vector S-metric whenever the base is one.
VectorSMetric max_construction(const VectorSMetric& base);

/// Stack scalar-target metrics over one carrier into a metric valued in
/// R^n with componentwise order.
VectorSMetric channel_metric(std::string name, const std::vector<VectorSMetric>& channels);

struct AxiomViolation {
    std::vector<double> points; // the offending triple (3) or quadruple (4)
    std::string detail;
};

struct AxiomReport {
    bool nonnegativity_ok = true; // S >= 0
    bool identity_ok = true;      // S = 0 iff all arguments equal
    bool tetrahedral_ok = true;   // S(x,y,z) <= S(x,x,a)+S(y,y,a)+S(z,z,a)
    std::optional<AxiomViolation> nonnegativity_witness;
    std::optional<AxiomViolation> identity_witness;
    std::optional<AxiomViolation> tetrahedral_witness;
    std::size_t samples_used = 0;
    bool exhaustive = false;

    bool all_ok() const { return nonnegativity_ok && identity_ok && tetrahedral_ok; }
    std::string summary() const;
};

/// Sampling-based axiom verification, deterministic for a given seed and
/// independent of how the budget might be partitioned across workers.
/// Finite carriers with at most 32 points are swept exhaustively.
/// Failed tuples are shrunk toward the carrier midpoint (at most 64
/// bisection steps) before being reported.
AxiomReport verify_axioms(const VectorSMetric& metric, std::size_t sample_budget,
                          std::uint64_t seed, double tau = default_tau_eq);

/// Sampled check of the swap identity S(x,x,y) = S(y,y,x), which every
/// vector S-metric satisfies as a consequence of the axioms.
bool symmetry_check(const VectorSMetric& metric, std::size_t sample_budget,
                    std::uint64_t seed, double tau = default_tau_eq);

} // namespace vsms

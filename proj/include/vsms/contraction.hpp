#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "vsms/smetric.hpp"

namespace vsms {

/// The five weights of the generalized contraction bound
///
///   S(px, px, qy) <= h1 S(kx, kx, ky) + h2 S(px, px, kx) + h3 S(qy, qy, ky)
///                  + h4 S(px, px, ky) + h5 S(qy, qy, kx)
///
/// Feasibility requires 2h1 + 2h2 + 2h3 + 4h4 + 4h5 < 1, which makes both
/// per-phase geometric rates well defined and < 1.
struct ContractionCoefficients {
    double h1 = 0.0;
    double h2 = 0.0;
    double h3 = 0.0;
    double h4 = 0.0;
    double h5 = 0.0;

    /// Throws ParameterError unless all five weights are finite and >= 0.
    void validate() const;

    /// 2h1 + 2h2 + 2h3 + 4h4 + 4h5.
    double weighted_sum() const;

    bool feasible() const;

    /// Rate of the odd-phase step: (h1+h2+h5)/(1-h3-2h5).
    double rate_odd_phase() const;
    /// Rate of the even-phase step: (h1+h3+h4)/(1-h2-2h4).
    double rate_even_phase() const;

    /// The dominating geometric rate max of the two phases; in [0,1) for
    /// feasible coefficients. Throws ParameterError when infeasible.
    double rate() const;

    std::string describe() const;
};

struct InequalityWitness {
    double xi = 0.0;
    double gamma = 0.0;
    std::string detail;
};

struct InequalityReport {
    bool passed = true;
    std::optional<InequalityWitness> witness;
    std::size_t samples_used = 0;

    explicit operator bool() const { return passed; }
};

/// Sampled check of the contraction bound over carrier pairs (xi, gamma).
/// The lattice comparison allows tau of slack per coordinate, so bounds
/// that are exactly tight still pass. q = p gives the two-map form.
/// Deterministic for a given seed regardless of budget partitioning.
InequalityReport check_inequality(const VectorSMetric& metric, const CarrierMap& p,
                                  const CarrierMap& q, const CarrierMap& k,
                                  const ContractionCoefficients& coeff,
                                  std::size_t sample_budget, std::uint64_t seed,
                                  double tau = default_tau_eq);

} // namespace vsms

#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "vsms/solver.hpp"

namespace vsms {

inline constexpr std::size_t default_quadrature_panels = 10'000;

/// The density of the integral-type contraction: a nonnegative summable
/// function whose running integral is strictly positive away from zero.
/// The catalog is closed so those analytic preconditions stay certifiable:
///   "one"       1
///   "linear"    2*t   (integral t^2)
///   "exp_decay" e^-t  (integral 1 - e^-t)
class IntegralGauge {
public:
    static IntegralGauge from_name(std::string_view name,
                                   std::size_t panels = default_quadrature_panels);

    static IntegralGauge one(std::size_t panels = default_quadrature_panels);
    static IntegralGauge linear(std::size_t panels = default_quadrature_panels);
    static IntegralGauge exp_decay(std::size_t panels = default_quadrature_panels);

    const std::string& name() const { return name_; }
    std::size_t panels() const { return panels_; }

    /// Density value at ell >= 0.
    double density(double ell) const;

    /// Running integral from 0 to t by composite trapezoid over the
    /// configured panel count. Strictly increasing, zero at zero.
    double integral(double t) const;

private:
    enum class Kind { One, Linear, ExpDecay };

    IntegralGauge(Kind kind, std::string name, std::size_t panels);

    Kind kind_;
    std::string name_;
    std::size_t panels_;
};

/// Geometric rate of the integral-contraction iteration,
/// theta = (h1+h2+h5)/(1-(h3+2*h5)); in [0,1) for feasible coefficients.
struct IntegralRate {
    double theta = 0.0;
};

IntegralRate integral_rate(const ContractionCoefficients& coeff);

/// Sampled check of the integral form of the two-map contraction bound:
/// the running integral up to S(px,px,py) against the five weighted
/// integrals up to the mixed S-terms. Requires a scalar-valued metric.
InequalityReport check_integral_inequality(const VectorSMetric& metric, const CarrierMap& p,
                                           const CarrierMap& k,
                                           const ContractionCoefficients& coeff,
                                           const IntegralGauge& gauge,
                                           std::size_t sample_budget, std::uint64_t seed,
                                           double tau = default_tau_eq);

/// Two-map iteration whose residuals live in the integral scale:
/// residual[b] = integral(S(gamma[b], gamma[b], gamma[b+1])), dominated
/// geometrically at theta. Shares the iterate updates with the plain
/// solver, so with gauge "one" both produce identical sequences.
ConvergenceTrace iterate_integral(const VectorSMetric& metric, const MapSystem& maps,
                                  const ContractionCoefficients& coeff,
                                  const IntegralGauge& gauge, double x0,
                                  std::size_t max_iter = default_max_iter,
                                  double tol = default_tol, double tau = default_tau_eq);

/// uniqueness_probe for the integral iteration.
UniquenessReport uniqueness_integral(const VectorSMetric& metric, const MapSystem& maps,
                                     const ContractionCoefficients& coeff,
                                     const IntegralGauge& gauge, std::span<const double> starts,
                                     std::size_t max_iter = default_max_iter,
                                     double tol = default_tol, double tau = default_tau_eq);

} // namespace vsms

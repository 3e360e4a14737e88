#include "vsms/integral.hpp"

#include <cmath>
#include <sstream>

namespace vsms {

IntegralGauge::IntegralGauge(Kind kind, std::string name, std::size_t panels)
    : kind_(kind), name_(std::move(name)), panels_(panels) {
    if (panels_ == 0) {
        throw ParameterError("IntegralGauge: panel count must be positive");
    }
}

IntegralGauge IntegralGauge::one(std::size_t panels) {
    return {Kind::One, "one", panels};
}

IntegralGauge IntegralGauge::linear(std::size_t panels) {
    return {Kind::Linear, "linear", panels};
}

IntegralGauge IntegralGauge::exp_decay(std::size_t panels) {
    return {Kind::ExpDecay, "exp_decay", panels};
}

IntegralGauge IntegralGauge::from_name(std::string_view name, std::size_t panels) {
    if (name == "one") return one(panels);
    if (name == "linear") return linear(panels);
    if (name == "exp_decay") return exp_decay(panels);
    throw ParameterError("IntegralGauge: unknown gauge \"" + std::string(name) +
                         "\" (catalog: one, linear, exp_decay)");
}

double IntegralGauge::density(double ell) const {
    if (!(ell >= 0.0) || !std::isfinite(ell)) {
        throw DomainError("IntegralGauge::density: argument must be finite and >= 0");
    }
    switch (kind_) {
    case Kind::One: return 1.0;
    case Kind::Linear: return 2.0 * ell;
    case Kind::ExpDecay: return std::exp(-ell);
    }
    return 0.0;
}

double IntegralGauge::integral(double t) const {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        std::ostringstream os;
        os << "IntegralGauge::integral: upper limit " << t << " must be finite and >= 0";
        throw DomainError(os.str());
    }
    if (t == 0.0) return 0.0;
    const double h = t / static_cast<double>(panels_);
    switch (kind_) {
    case Kind::One:
        // The trapezoid sum of a constant accumulates to exactly the panel
        // count, so h * panels_ is bit-identical to the summed rule.
        return h * static_cast<double>(panels_);
    case Kind::Linear: {
        double acc = 0.5 * (0.0 + 2.0 * t);
        for (std::size_t i = 1; i < panels_; ++i) {
            acc += 2.0 * (static_cast<double>(i) * h);
        }
        return h * acc;
    }
    case Kind::ExpDecay: {
        double acc = 0.5 * (1.0 + std::exp(-t));
        for (std::size_t i = 1; i < panels_; ++i) {
            acc += std::exp(-(static_cast<double>(i) * h));
        }
        return h * acc;
    }
    }
    return 0.0;
}

IntegralRate integral_rate(const ContractionCoefficients& coeff) {
    if (!coeff.feasible()) {
        std::ostringstream os;
        os << "integral_rate: coefficients " << coeff.describe()
           << " are infeasible (weighted sum " << coeff.weighted_sum() << " >= 1)";
        throw ParameterError(os.str());
    }
    return IntegralRate{(coeff.h1 + coeff.h2 + coeff.h5) /
                        (1.0 - (coeff.h3 + 2.0 * coeff.h5))};
}

namespace {

void require_scalar_target(const VectorSMetric& metric, const char* op) {
    if (metric.target().dimension() != 1) {
        throw UnsupportedLatticeError(
            std::string(op) +
            ": the integral form needs a scalar-valued metric, got target " +
            metric.target().describe());
    }
}

} // namespace

InequalityReport check_integral_inequality(const VectorSMetric& metric, const CarrierMap& p,
                                           const CarrierMap& k,
                                           const ContractionCoefficients& coeff,
                                           const IntegralGauge& gauge,
                                           std::size_t sample_budget, std::uint64_t seed,
                                           double tau) {
    if (sample_budget == 0) {
        throw ParameterError("check_integral_inequality: sample budget must be positive");
    }
    require_scalar_target(metric, "check_integral_inequality");
    if (!coeff.feasible()) {
        std::ostringstream os;
        os << "check_integral_inequality: coefficients " << coeff.describe()
           << " are infeasible (weighted sum " << coeff.weighted_sum() << " >= 1)";
        throw ParameterError(os.str());
    }
    const CarrierSpace& carrier = metric.carrier();

    const auto value = [&](double a, double b, double c) {
        return metric.eval(a, b, c).scalar_value();
    };
    const auto holds_at = [&](double xi, double gamma) {
        const double pxi = p(xi);
        const double pgm = p(gamma);
        const double kxi = k(xi);
        const double kgm = k(gamma);
        for (double out : {pxi, pgm, kxi, kgm}) {
            if (!carrier.contains(out, default_tau_eq)) {
                std::ostringstream os;
                os << "check_integral_inequality: map output " << out
                   << " escapes the carrier " << carrier.describe();
                throw DomainError(os.str());
            }
        }
        const double lhs = gauge.integral(value(pxi, pxi, pgm));
        const double rhs = coeff.h1 * gauge.integral(value(kxi, kxi, kgm)) +
                           coeff.h2 * gauge.integral(value(pxi, pxi, kxi)) +
                           coeff.h3 * gauge.integral(value(pgm, pgm, kgm)) +
                           coeff.h4 * gauge.integral(value(pxi, pxi, kgm)) +
                           coeff.h5 * gauge.integral(value(pgm, pgm, kxi));
        return lhs <= rhs + tau;
    };

    InequalityReport report;
    for (std::size_t i = 0; i < sample_budget; ++i) {
        SampleStream stream(seed, i);
        const double xi = carrier.sample(stream);
        const double gamma = carrier.sample(stream);
        ++report.samples_used;
        if (!holds_at(xi, gamma)) {
            report.passed = false;
            std::ostringstream os;
            os << "integral contraction bound fails at (xi, gamma) = (" << xi << ", " << gamma
               << ")";
            report.witness = InequalityWitness{xi, gamma, os.str()};
            break;
        }
    }
    return report;
}

ConvergenceTrace iterate_integral(const VectorSMetric& metric, const MapSystem& maps,
                                  const ContractionCoefficients& coeff,
                                  const IntegralGauge& gauge, double x0, std::size_t max_iter,
                                  double tol, double tau) {
    require_scalar_target(metric, "iterate_integral");
    const double theta = integral_rate(coeff).theta;
    return detail::alternating_iteration(
        metric, maps, /*alternate_q=*/false,
        [&gauge](const LatticeElement& v) { return gauge.integral(v.scalar_value()); }, theta,
        x0, max_iter, tol, tau);
}

UniquenessReport uniqueness_integral(const VectorSMetric& metric, const MapSystem& maps,
                                     const ContractionCoefficients& coeff,
                                     const IntegralGauge& gauge, std::span<const double> starts,
                                     std::size_t max_iter, double tol, double tau) {
    if (starts.empty()) {
        throw ParameterError("uniqueness_integral: needs at least one start");
    }
    UniquenessReport report;
    report.runs.reserve(starts.size());
    for (double x0 : starts) {
        report.runs.push_back(iterate_integral(metric, maps, coeff, gauge, x0, max_iter, tol, tau));
        if (report.runs.back().verdict != Verdict::Converged) {
            report.outcome = UniquenessReport::Outcome::Inconclusive;
            return report;
        }
    }
    for (std::size_t i = 0; i < report.runs.size(); ++i) {
        for (std::size_t j = i + 1; j < report.runs.size(); ++j) {
            const double li = *report.runs[i].limit;
            const double lj = *report.runs[j].limit;
            if (!(gauge.integral(metric.eval(li, li, lj).scalar_value()) <= tol)) {
                report.outcome = UniquenessReport::Outcome::Divergent;
                report.divergent = {li, lj};
                return report;
            }
        }
    }
    report.outcome = UniquenessReport::Outcome::Unique;
    report.limit = *report.runs.front().limit;
    return report;
}

} // namespace vsms

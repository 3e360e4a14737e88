#include "vsms/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vsms {

void ContractionCoefficients::validate() const {
    const double hs[] = {h1, h2, h3, h4, h5};
    for (int i = 0; i < 5; ++i) {
        if (!std::isfinite(hs[i]) || hs[i] < 0.0) {
            std::ostringstream os;
            os << "contraction coefficients: h" << (i + 1) << " = " << hs[i]
               << " must be finite and >= 0";
            throw ParameterError(os.str());
        }
    }
}

double ContractionCoefficients::weighted_sum() const {
    validate();
    return 2.0 * h1 + 2.0 * h2 + 2.0 * h3 + 4.0 * h4 + 4.0 * h5;
}

bool ContractionCoefficients::feasible() const {
    return weighted_sum() < 1.0;
}

double ContractionCoefficients::rate_odd_phase() const {
    return (h1 + h2 + h5) / (1.0 - h3 - 2.0 * h5);
}

double ContractionCoefficients::rate_even_phase() const {
    return (h1 + h3 + h4) / (1.0 - h2 - 2.0 * h4);
}

double ContractionCoefficients::rate() const {
    if (!feasible()) {
        std::ostringstream os;
        os << "rate: coefficients are infeasible (weighted sum " << weighted_sum() << " >= 1)";
        throw ParameterError(os.str());
    }
    return std::max(rate_odd_phase(), rate_even_phase());
}

std::string ContractionCoefficients::describe() const {
    std::ostringstream os;
    os << "(" << h1 << ", " << h2 << ", " << h3 << ", " << h4 << ", " << h5 << ")";
    return os.str();
}

namespace {

double checked_map(const CarrierMap& f, const char* name, double x,
                   const CarrierSpace& carrier) {
    const double y = f(x);
    if (!carrier.contains(y, default_tau_eq)) {
        std::ostringstream os;
        os << "map " << name << " escapes the carrier: " << name << "(" << x << ") = " << y
           << " outside " << carrier.describe();
        throw DomainError(os.str());
    }
    return y;
}

} // namespace

InequalityReport check_inequality(const VectorSMetric& metric, const CarrierMap& p,
                                  const CarrierMap& q, const CarrierMap& k,
                                  const ContractionCoefficients& coeff,
                                  std::size_t sample_budget, std::uint64_t seed, double tau) {
    if (sample_budget == 0) {
        throw ParameterError("check_inequality: sample budget must be positive");
    }
    if (!coeff.feasible()) {
        std::ostringstream os;
        os << "check_inequality: coefficients " << coeff.describe()
           << " are infeasible (weighted sum " << coeff.weighted_sum() << " >= 1)";
        throw ParameterError(os.str());
    }
    const CarrierSpace& carrier = metric.carrier();

    InequalityReport report;
    const auto holds_at = [&](double xi, double gamma) {
        const double pxi = checked_map(p, "p", xi, carrier);
        const double qgm = checked_map(q, "q", gamma, carrier);
        const double kxi = checked_map(k, "k", xi, carrier);
        const double kgm = checked_map(k, "k", gamma, carrier);
        const LatticeElement lhs = metric.eval(pxi, pxi, qgm);
        LatticeElement rhs = scale(coeff.h1, metric.eval(kxi, kxi, kgm));
        rhs = add(rhs, scale(coeff.h2, metric.eval(pxi, pxi, kxi)));
        rhs = add(rhs, scale(coeff.h3, metric.eval(qgm, qgm, kgm)));
        rhs = add(rhs, scale(coeff.h4, metric.eval(pxi, pxi, kgm)));
        rhs = add(rhs, scale(coeff.h5, metric.eval(qgm, qgm, kxi)));
        std::vector<double> slacked(rhs.coords().begin(), rhs.coords().end());
        for (double& c : slacked) c += tau;
        return leq(lhs, LatticeElement(rhs.space(), std::move(slacked)));
    };

    for (std::size_t i = 0; i < sample_budget; ++i) {
        SampleStream stream(seed, i);
        const double xi = carrier.sample(stream);
        const double gamma = carrier.sample(stream);
        ++report.samples_used;
        if (!holds_at(xi, gamma)) {
            report.passed = false;
            std::ostringstream os;
            os << "contraction bound fails at (xi, gamma) = (" << xi << ", " << gamma << ")";
            report.witness = InequalityWitness{xi, gamma, os.str()};
            break;
        }
    }
    return report;
}

} // namespace vsms

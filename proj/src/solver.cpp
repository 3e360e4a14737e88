#include "vsms/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace vsms {

namespace {

constexpr int rate_violation_streak = 5;

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

MapSystem::MapSystem(CarrierSpace carrier, CarrierMap p, CarrierMap q, CarrierMap k,
                     std::optional<CarrierMap> k_preimage)
    : carrier_(std::move(carrier)), p_(std::move(p)), q_(std::move(q)), k_(std::move(k)),
      preimage_(std::move(k_preimage)) {
    if (!p_ || !q_ || !k_) {
        throw ParameterError("MapSystem: p, q, k must all be callable");
    }
    if (!preimage_ && carrier_.is_interval()) {
        // Bisection synthesis needs a direction; probe k on a fixed grid.
        const int probes = 65;
        double prev = k_(carrier_.lo());
        int up = 0, down = 0;
        for (int i = 1; i < probes; ++i) {
            const double x = carrier_.lo() + (carrier_.hi() - carrier_.lo()) * i / (probes - 1);
            const double cur = k_(x);
            if (cur > prev) ++up;
            if (cur < prev) ++down;
            prev = cur;
        }
        if (up > 0 && down > 0) {
            throw ParameterError(
                "MapSystem: k is not monotone on the probe grid; supply an explicit "
                "k-preimage oracle");
        }
        if (up == 0 && down == 0) {
            throw ParameterError(
                "MapSystem: k looks constant on the probe grid; supply an explicit "
                "k-preimage oracle");
        }
        k_increasing_ = up > 0;
    }
}

MapSystem MapSystem::two_map(CarrierSpace carrier, CarrierMap p, CarrierMap k,
                             std::optional<CarrierMap> k_preimage) {
    CarrierMap q = p;
    return MapSystem(std::move(carrier), std::move(p), std::move(q), std::move(k),
                     std::move(k_preimage));
}

double MapSystem::apply(const CarrierMap& f, const char* name, double x) const {
    const double y = f(x);
    if (!carrier_.contains(y, default_tau_eq)) {
        std::ostringstream os;
        os << "map " << name << " escapes the carrier: " << name << "(" << x << ") = " << y
           << " outside " << carrier_.describe();
        throw DomainError(os.str());
    }
    return y;
}

double MapSystem::bisect_preimage(double y, double tau) const {
    double lo = carrier_.lo();
    double hi = carrier_.hi();
    const double f_lo = k_(lo);
    const double f_hi = k_(hi);
    const double y_min = std::min(f_lo, f_hi);
    const double y_max = std::max(f_lo, f_hi);
    const double range_slack = tau * std::max({1.0, std::abs(y_min), std::abs(y_max)});
    if (y < y_min - range_slack || y > y_max + range_slack) {
        std::ostringstream os;
        os << "no k-preimage: value " << y << " lies outside k(" << carrier_.describe()
           << ") = [" << y_min << ", " << y_max << "]";
        throw RangeContainmentError(os.str());
    }
    const double target = std::clamp(y, y_min, y_max);
    if (f_lo == target) return lo;
    if (f_hi == target) return hi;
    // Bisect to the last representable bit; the iterate accuracy rides on it.
    while (true) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid == lo || mid == hi) break;
        const double fm = k_(mid);
        if (fm == target) return mid;
        if ((fm < target) == k_increasing_) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return std::abs(k_(lo) - target) <= std::abs(k_(hi) - target) ? lo : hi;
}

double MapSystem::k_preimage(double y, double tau) const {
    double w = 0.0;
    if (preimage_) {
        w = (*preimage_)(y);
        if (!carrier_.contains(w, tau)) {
            std::ostringstream os;
            os << "k-preimage oracle left the carrier: preimage(" << y << ") = " << w;
            throw RangeContainmentError(os.str());
        }
    } else if (carrier_.is_interval()) {
        w = bisect_preimage(y, tau);
    } else {
        const auto& pts = carrier_.points();
        double best = pts.front();
        double best_err = std::abs(k_(best) - y);
        for (double pt : pts) {
            const double err = std::abs(k_(pt) - y);
            if (err < best_err) {
                best = pt;
                best_err = err;
            }
        }
        w = best;
    }
    if (!(std::abs(k_(w) - y) <= tau)) {
        std::ostringstream os;
        os << "no k-preimage within tolerance for value " << y << " (nearest k(" << w
           << ") = " << k_(w) << ")";
        throw RangeContainmentError(os.str());
    }
    return w;
}

RangeContainmentReport verify_range_containment(const MapSystem& maps,
                                                std::size_t sample_budget, std::uint64_t seed,
                                                double tau) {
    if (sample_budget == 0) {
        throw ParameterError("verify_range_containment: sample budget must be positive");
    }
    RangeContainmentReport report;
    for (std::size_t i = 0; i < sample_budget; ++i) {
        SampleStream stream(seed, i);
        const double x = maps.carrier().sample(stream);
        for (const double y : {maps.p(x), maps.q(x)}) {
            try {
                maps.k_preimage(y, tau);
            } catch (const RangeContainmentError& e) {
                report.ok = false;
                report.orphan = y;
                report.detail = e.what();
                return report;
            }
        }
    }
    return report;
}

bool continuity_probe(const CarrierMap& f, const CarrierSpace& carrier,
                      std::size_t sample_pairs, std::uint64_t seed) {
    if (!carrier.is_interval()) return true;
    const double span = carrier.hi() - carrier.lo();
    for (std::size_t i = 0; i < sample_pairs; ++i) {
        SampleStream stream(seed, i);
        double a = carrier.sample(stream);
        double b = carrier.sample(stream);
        if (a > b) std::swap(a, b);
        // Shrink the pair toward its largest jump; |f(b) - f(a)| must
        // vanish with |b - a| unless a discontinuity sits between them.
        while (b - a > 1e-12 * span) {
            const double mid = a + 0.5 * (b - a);
            if (std::abs(f(mid) - f(a)) >= std::abs(f(b) - f(mid))) {
                b = mid;
            } else {
                a = mid;
            }
        }
        if (std::abs(f(b) - f(a)) > 1e-6 * std::max(1.0, span)) return false;
    }
    return true;
}

Gauge::Gauge(std::string name, std::function<double(const LatticeElement&)> rule)
    : name_(std::move(name)), rule_(std::move(rule)) {
    if (!rule_) {
        throw ParameterError("Gauge: rule must be callable");
    }
}

Gauge Gauge::max_abs() {
    return Gauge("max_abs", [](const LatticeElement& x) { return max_abs_coordinate(x); });
}

std::string_view verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Converged: return "converged";
    case Verdict::BudgetExhausted: return "budget_exhausted";
    case Verdict::RateViolation: return "rate_violation";
    }
    return "?";
}

void write_trace_csv(const ConvergenceTrace& trace, std::ostream& out) {
    out << "iteration,xi,gamma,residual,bound,verdict\n";
    for (std::size_t b = 0; b < trace.xi.size(); ++b) {
        out << b << ',' << format_real(trace.xi[b]) << ',' << format_real(trace.gamma[b]) << ',';
        if (b < trace.residuals.size()) out << format_real(trace.residuals[b]);
        out << ',';
        if (b < trace.bounds.size()) out << format_real(trace.bounds[b]);
        out << ',';
        out << (b + 1 == trace.xi.size() ? verdict_name(trace.verdict) : "running");
        out << '\n';
    }
}

void write_trace_csv(const ConvergenceTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("write_trace_csv: cannot open " + path.string());
    }
    write_trace_csv(trace, out);
}

namespace detail {

ConvergenceTrace alternating_iteration(
    const VectorSMetric& metric, const MapSystem& maps, bool alternate_q,
    const std::function<double(const LatticeElement&)>& residual, double rate, double x0,
    std::size_t max_iter, double tol, double tau) {
    if (max_iter == 0) {
        throw ParameterError("iterate: max_iter must be positive");
    }
    if (!(tol > 0.0)) {
        throw ParameterError("iterate: tol must be positive");
    }
    maps.carrier().require_contains(x0, "iterate: start point");

    ConvergenceTrace trace;
    trace.rate = rate;
    trace.xi.push_back(x0);
    trace.gamma.push_back(maps.k(x0));

    int over_rate_streak = 0;
    for (std::size_t b = 0; b < max_iter; ++b) {
        const bool odd_step = alternate_q && (b % 2 == 1);
        const double mapped = odd_step ? maps.q(trace.xi[b]) : maps.p(trace.xi[b]);
        const double xi_next = maps.k_preimage(mapped, tau);
        trace.xi.push_back(xi_next);
        trace.gamma.push_back(maps.k(xi_next));

        const double r = residual(metric.eval(trace.gamma[b], trace.gamma[b], trace.gamma[b + 1]));
        trace.residuals.push_back(r);
        trace.bounds.push_back(std::pow(rate, static_cast<double>(b)) * trace.residuals.front());

        if (r < tol) {
            trace.verdict = Verdict::Converged;
            trace.limit = trace.gamma.back();
            return trace;
        }
        if (b > 0) {
            if (r > rate * trace.residuals[b - 1] + tau) {
                if (++over_rate_streak >= rate_violation_streak) {
                    trace.verdict = Verdict::RateViolation;
                    return trace;
                }
            } else {
                over_rate_streak = 0;
            }
        }
    }
    trace.verdict = Verdict::BudgetExhausted;
    return trace;
}

} // namespace detail

ConvergenceTrace iterate(const VectorSMetric& metric, const MapSystem& maps,
                         const ContractionCoefficients& coeff, double x0, const Gauge& g,
                         std::size_t max_iter, double tol, double tau) {
    const double rate = coeff.rate(); // rejects infeasible coefficients
    return detail::alternating_iteration(
        metric, maps, /*alternate_q=*/true,
        [&g](const LatticeElement& v) { return g(v); }, rate, x0, max_iter, tol, tau);
}

CoincidenceReport point_of_coincidence(const VectorSMetric& metric, const MapSystem& maps,
                                       const ConvergenceTrace& trace, double tol,
                                       const Gauge& g, double tau) {
    if (trace.verdict != Verdict::Converged || !trace.limit) {
        throw ParameterError("point_of_coincidence: trace has no converged limit");
    }
    const double limit = *trace.limit;
    CoincidenceReport report;
    report.omega = maps.k_preimage(limit, tau);
    const double p_omega = maps.p(report.omega);
    const double q_omega = maps.q(report.omega);
    report.p_gauge = g(metric.eval(p_omega, p_omega, limit));
    report.q_gauge = g(metric.eval(q_omega, q_omega, limit));
    report.confirmed = report.p_gauge < tol && report.q_gauge < tol;
    return report;
}

namespace {

double refine_crossing(const std::function<double(double)>& diff, double a, double b) {
    double fa = diff(a);
    for (int step = 0; step < 200; ++step) {
        const double mid = a + 0.5 * (b - a);
        if (mid == a || mid == b) break;
        const double fm = diff(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return a + 0.5 * (b - a);
}

} // namespace

WeakCompatReport weak_compatibility_check(const MapSystem& maps, MapPair pair,
                                          std::size_t sample_budget, std::uint64_t seed,
                                          double tol) {
    if (sample_budget == 0) {
        throw ParameterError("weak_compatibility_check: sample budget must be positive");
    }
    if (!(tol > 0.0)) {
        throw ParameterError("weak_compatibility_check: tol must be positive");
    }
    const auto f = [&](double x) { return pair == MapPair::PK ? maps.p(x) : maps.q(x); };
    const auto k = [&](double x) { return maps.k(x); };
    const auto diff = [&](double x) { return f(x) - k(x); };

    WeakCompatReport report;
    const auto check_point = [&](double alpha) {
        if (!(std::abs(diff(alpha)) < tol)) return true;
        report.coincidence_points.push_back(alpha);
        const bool commutes = std::abs(f(k(alpha)) - k(f(alpha))) < tol;
        if (!commutes) {
            report.compatible = false;
            report.violation_point = alpha;
        }
        return commutes;
    };

    if (!maps.carrier().is_interval()) {
        for (double pt : maps.carrier().points()) {
            if (!check_point(pt)) return report;
        }
        return report;
    }

    // Dense grid sweep with bisection refinement at sign changes of f - k,
    // topped up with seeded random probes.
    const double lo = maps.carrier().lo();
    const double hi = maps.carrier().hi();
    const std::size_t grid = std::max<std::size_t>(2, sample_budget / 2);
    double prev_x = lo;
    double prev_d = diff(lo);
    if (!check_point(lo)) return report;
    for (std::size_t i = 1; i < grid; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid - 1);
        const double d = diff(x);
        if ((d < 0.0) != (prev_d < 0.0) && prev_d != 0.0 && d != 0.0) {
            if (!check_point(refine_crossing(diff, prev_x, x))) return report;
        }
        if (!check_point(x)) return report;
        prev_x = x;
        prev_d = d;
    }
    for (std::size_t i = 0; i < sample_budget - std::min(sample_budget, grid); ++i) {
        SampleStream stream(seed, i);
        if (!check_point(stream.uniform(lo, hi))) return report;
    }
    return report;
}

UniquenessReport uniqueness_probe(const VectorSMetric& metric, const MapSystem& maps,
                                  const ContractionCoefficients& coeff, const Gauge& g,
                                  std::span<const double> starts, std::size_t max_iter,
                                  double tol, double tau) {
    if (starts.empty()) {
        throw ParameterError("uniqueness_probe: needs at least one start");
    }
    UniquenessReport report;
    report.runs.reserve(starts.size());
    for (double x0 : starts) {
        report.runs.push_back(iterate(metric, maps, coeff, x0, g, max_iter, tol, tau));
        if (report.runs.back().verdict != Verdict::Converged) {
            report.outcome = UniquenessReport::Outcome::Inconclusive;
            return report;
        }
    }
    for (std::size_t i = 0; i < report.runs.size(); ++i) {
        for (std::size_t j = i + 1; j < report.runs.size(); ++j) {
            const double li = *report.runs[i].limit;
            const double lj = *report.runs[j].limit;
            if (!(g(metric.eval(li, li, lj)) <= tol)) {
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

#include "vsms/smetric.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace vsms {

CarrierSpace CarrierSpace::interval(double lo, double hi, Sampling sampling,
                                    std::size_t grid_points) {
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
        throw ParameterError("CarrierSpace::interval: requires finite lo < hi");
    }
    if (grid_points < 2) {
        throw ParameterError("CarrierSpace::interval: grid needs at least 2 points");
    }
    return CarrierSpace(Interval{lo, hi, grid_points}, sampling);
}

CarrierSpace CarrierSpace::finite(std::vector<double> points) {
    if (points.empty()) {
        throw ParameterError("CarrierSpace::finite: point set must be nonempty");
    }
    return CarrierSpace(FiniteSet{std::move(points)});
}

double CarrierSpace::lo() const {
    return std::get<Interval>(body_).lo;
}

double CarrierSpace::hi() const {
    return std::get<Interval>(body_).hi;
}

const std::vector<double>& CarrierSpace::points() const {
    return std::get<FiniteSet>(body_).points;
}

bool CarrierSpace::contains(double x, double slack) const {
    if (const auto* iv = std::get_if<Interval>(&body_)) {
        return x >= iv->lo - slack && x <= iv->hi + slack;
    }
    for (double p : std::get<FiniteSet>(body_).points) {
        if (std::abs(p - x) <= slack) return true;
    }
    return false;
}

void CarrierSpace::require_contains(double x, const char* what) const {
    if (!contains(x, default_tau_eq)) {
        std::ostringstream os;
        os << what << ": point " << x << " is outside the carrier " << describe();
        throw DomainError(os.str());
    }
}

double CarrierSpace::sample(SampleStream& stream) const {
    if (const auto* iv = std::get_if<Interval>(&body_)) {
        if (sampling_ == Sampling::UniformRandom) {
            return stream.uniform(iv->lo, iv->hi);
        }
        const std::size_t i = stream.uniform_index(iv->grid_points);
        return iv->lo + (iv->hi - iv->lo) * static_cast<double>(i) /
                            static_cast<double>(iv->grid_points - 1);
    }
    const auto& pts = std::get<FiniteSet>(body_).points;
    return pts[stream.uniform_index(pts.size())];
}

double CarrierSpace::midpoint() const {
    if (const auto* iv = std::get_if<Interval>(&body_)) {
        return 0.5 * (iv->lo + iv->hi);
    }
    const auto& pts = std::get<FiniteSet>(body_).points;
    return pts[pts.size() / 2];
}

bool CarrierSpace::exhaustible(std::size_t limit) const {
    const auto* fs = std::get_if<FiniteSet>(&body_);
    return fs != nullptr && fs->points.size() <= limit;
}

std::string CarrierSpace::describe() const {
    std::ostringstream os;
    if (const auto* iv = std::get_if<Interval>(&body_)) {
        os << "[" << iv->lo << ", " << iv->hi << "]";
    } else {
        os << "{" << std::get<FiniteSet>(body_).points.size() << " points}";
    }
    return os.str();
}

VectorSMetric::VectorSMetric(std::string name, CarrierSpace carrier, LatticeSpace target,
                             Rule rule)
    : name_(std::move(name)), carrier_(std::move(carrier)), target_(target),
      rule_(std::move(rule)) {
    if (!rule_) {
        throw ParameterError("VectorSMetric: rule must be callable");
    }
}

LatticeElement VectorSMetric::eval(double x, double y, double z) const {
    carrier_.require_contains(x, "VectorSMetric::eval");
    carrier_.require_contains(y, "VectorSMetric::eval");
    carrier_.require_contains(z, "VectorSMetric::eval");
    LatticeElement value = rule_(x, y, z);
    if (value.space() != target_) {
        throw DimensionError("VectorSMetric::eval: rule produced a value in " +
                             value.space().describe() + ", expected " + target_.describe());
    }
    return value;
}

VectorSMetric sum_abs_metric(CarrierSpace carrier, LatticeSpace target) {
    return VectorSMetric(
        "sum_abs", std::move(carrier), target,
        [target](double x, double y, double z) {
            const double v = std::abs(x - y) + std::abs(y - z) + std::abs(z - x);
            return LatticeElement(target, std::vector<double>(target.dimension(), v));
        });
}

VectorSMetric max_abs_metric(CarrierSpace carrier, LatticeSpace target) {
    return VectorSMetric("max_abs", std::move(carrier), target,
                         [target](double x, double y, double z) {
                             const double v = std::max({std::abs(x - y), std::abs(y - z),
                                                        std::abs(z - x)});
                             return LatticeElement(target,
                                                   std::vector<double>(target.dimension(), v));
                         });
}

VectorSMetric max_construction(const VectorSMetric& base) {
    return VectorSMetric("max_of(" + base.name() + ")", base.carrier(), base.target(),
                         [base](double x, double y, double z) {
                             return join(join(base.eval(x, x, y), base.eval(y, y, z)),
                                         base.eval(z, z, x));
                         });
}

VectorSMetric channel_metric(std::string name, const std::vector<VectorSMetric>& channels) {
    if (channels.empty()) {
        throw ParameterError("channel_metric: needs at least one channel");
    }
    for (const auto& ch : channels) {
        if (ch.target().dimension() != 1) {
            throw ParameterError("channel_metric: channels must be scalar-valued");
        }
    }
    const LatticeSpace target = LatticeSpace::vector(channels.size());
    return VectorSMetric(std::move(name), channels.front().carrier(), target,
                         [channels, target](double x, double y, double z) {
                             std::vector<double> coords;
                             coords.reserve(channels.size());
                             for (const auto& ch : channels) {
                                 coords.push_back(ch.eval(x, y, z).scalar_value());
                             }
                             return LatticeElement(target, std::move(coords));
                         });
}

std::string AxiomReport::summary() const {
    std::ostringstream os;
    os << "nonnegativity=" << (nonnegativity_ok ? "pass" : "FAIL")
       << " identity=" << (identity_ok ? "pass" : "FAIL")
       << " tetrahedral=" << (tetrahedral_ok ? "pass" : "FAIL")
       << " (samples=" << samples_used << (exhaustive ? ", exhaustive" : "") << ")";
    const AxiomViolation* w = nonnegativity_witness ? &*nonnegativity_witness
                              : identity_witness   ? &*identity_witness
                              : tetrahedral_witness ? &*tetrahedral_witness
                                                    : nullptr;
    if (w != nullptr) {
        os << " witness=(";
        for (std::size_t i = 0; i < w->points.size(); ++i) {
            if (i > 0) os << ", ";
            os << w->points[i];
        }
        os << ") " << w->detail;
    }
    return os.str();
}

namespace {

constexpr std::uint64_t tag_nonneg = 1;
constexpr std::uint64_t tag_identity = 2;
constexpr std::uint64_t tag_diagonal = 3;
constexpr std::uint64_t tag_tetra = 4;
constexpr std::uint64_t tag_symmetry = 5;

std::uint64_t stream_index(std::uint64_t tag, std::uint64_t i) {
    return (tag << 40) | i;
}

bool all_equal(const std::vector<double>& pts) {
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i] != pts[0]) return false;
    }
    return true;
}

/// Pull a violating tuple toward the carrier midpoint while it keeps
/// violating; the last violating tuple is the reported witness.
AxiomViolation shrink(const VectorSMetric& metric, std::vector<double> points,
                      const std::function<bool(const std::vector<double>&)>& violates,
                      std::string detail) {
    if (metric.carrier().is_interval()) {
        const double mid = metric.carrier().midpoint();
        for (int step = 0; step < 64; ++step) {
            std::vector<double> candidate(points.size());
            for (std::size_t i = 0; i < points.size(); ++i) {
                candidate[i] = 0.5 * (points[i] + mid);
            }
            if (!violates(candidate)) break;
            points = std::move(candidate);
        }
    }
    return AxiomViolation{std::move(points), std::move(detail)};
}

struct TupleSource {
    const CarrierSpace& carrier;
    std::uint64_t seed;
    std::size_t budget;

    /// Visit tuples of the given arity; exhaustive over small finite
    /// carriers, seeded sampling otherwise. Returns samples visited.
    template <typename Fn>
    std::size_t visit(std::uint64_t tag, std::size_t arity, Fn&& fn) const {
        if (carrier.exhaustible()) {
            const auto& pts = carrier.points();
            std::vector<std::size_t> idx(arity, 0);
            std::size_t count = 0;
            while (true) {
                std::vector<double> tuple(arity);
                for (std::size_t i = 0; i < arity; ++i) tuple[i] = pts[idx[i]];
                ++count;
                if (!fn(tuple)) return count;
                std::size_t pos = 0;
                while (pos < arity && ++idx[pos] == pts.size()) {
                    idx[pos] = 0;
                    ++pos;
                }
                if (pos == arity) return count;
            }
        }
        for (std::size_t i = 0; i < budget; ++i) {
            SampleStream stream(seed, stream_index(tag, i));
            std::vector<double> tuple(arity);
            for (double& t : tuple) t = carrier.sample(stream);
            if (!fn(tuple)) return i + 1;
        }
        return budget;
    }
};

} // namespace

AxiomReport verify_axioms(const VectorSMetric& metric, std::size_t sample_budget,
                          std::uint64_t seed, double tau) {
    if (sample_budget == 0) {
        throw ParameterError("verify_axioms: sample budget must be positive");
    }
    AxiomReport report;
    report.exhaustive = metric.carrier().exhaustible();
    const TupleSource source{metric.carrier(), seed, sample_budget};

    // (a) nonnegativity
    report.samples_used += source.visit(tag_nonneg, 3, [&](const std::vector<double>& t) {
        if (is_nonnegative(metric.eval(t[0], t[1], t[2]), tau)) return true;
        report.nonnegativity_ok = false;
        report.nonnegativity_witness = shrink(
            metric, t,
            [&](const std::vector<double>& c) {
                return !is_nonnegative(metric.eval(c[0], c[1], c[2]), tau);
            },
            "S has a negative coordinate");
        return false;
    });

    // (b) zero on the diagonal ...
    report.samples_used += source.visit(tag_diagonal, 1, [&](const std::vector<double>& t) {
        const double c = t[0];
        if (max_abs_coordinate(metric.eval(c, c, c)) <= tau) return true;
        report.identity_ok = false;
        report.identity_witness = shrink(
            metric, {c, c, c},
            [&](const std::vector<double>& cand) {
                return max_abs_coordinate(metric.eval(cand[0], cand[0], cand[0])) > tau;
            },
            "S(c,c,c) != 0");
        return false;
    });

    // ... and nonzero off it. Besides generic triples, probe the patterned
    // tuples (x,x,z): rules that ignore an argument vanish exactly there.
    if (report.identity_ok) {
        report.samples_used += source.visit(tag_identity, 3, [&](const std::vector<double>& t) {
            const auto zero_off_diagonal = [&](const std::vector<double>& c) {
                return !all_equal(c) && max_abs_coordinate(metric.eval(c[0], c[1], c[2])) <= tau;
            };
            for (const std::vector<double>& tuple :
                 {t, std::vector<double>{t[0], t[0], t[2]}}) {
                if (!zero_off_diagonal(tuple)) continue;
                report.identity_ok = false;
                report.identity_witness =
                    shrink(metric, tuple, zero_off_diagonal, "S = 0 with not-all-equal arguments");
                return false;
            }
            return true;
        });
    }

    // (c) tetrahedral inequality
    report.samples_used += source.visit(tag_tetra, 4, [&](const std::vector<double>& t) {
        const auto violates = [&](const std::vector<double>& q) {
            const LatticeElement lhs = metric.eval(q[0], q[1], q[2]);
            LatticeElement rhs = add(add(metric.eval(q[0], q[0], q[3]), metric.eval(q[1], q[1], q[3])),
                                     metric.eval(q[2], q[2], q[3]));
            std::vector<double> slacked(rhs.coords().begin(), rhs.coords().end());
            for (double& c : slacked) c += tau;
            return !leq(lhs, LatticeElement(rhs.space(), std::move(slacked)));
        };
        if (!violates(t)) return true;
        report.tetrahedral_ok = false;
        report.tetrahedral_witness = shrink(metric, t, violates, "tetrahedral inequality fails");
        return false;
    });

    return report;
}

bool symmetry_check(const VectorSMetric& metric, std::size_t sample_budget,
                    std::uint64_t seed, double tau) {
    if (sample_budget == 0) {
        throw ParameterError("symmetry_check: sample budget must be positive");
    }
    const TupleSource source{metric.carrier(), seed, sample_budget};
    bool ok = true;
    source.visit(tag_symmetry, 2, [&](const std::vector<double>& t) {
        ok = approx_equal(metric.eval(t[0], t[0], t[1]), metric.eval(t[1], t[1], t[0]), tau);
        return ok;
    });
    return ok;
}

} // namespace vsms

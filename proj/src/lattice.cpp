#include "vsms/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vsms {

namespace {

std::string kind_name(OrderKind k) {
    switch (k) {
    case OrderKind::Scalar: return "scalar";
    case OrderKind::Componentwise: return "vector";
    case OrderKind::FunctionGrid: return "grid";
    }
    return "?";
}

void require_same_space(const LatticeElement& x, const LatticeElement& y,
                        const char* op) {
    if (x.space() != y.space()) {
        throw DimensionError(std::string(op) + ": operands belong to different lattice spaces (" +
                             x.space().describe() + " vs " + y.space().describe() + ")");
    }
}

} // namespace

LatticeSpace LatticeSpace::vector(std::size_t dimension) {
    if (dimension == 0) {
        throw ParameterError("LatticeSpace::vector: dimension must be positive");
    }
    return {OrderKind::Componentwise, dimension};
}

LatticeSpace LatticeSpace::grid(std::size_t grid_points) {
    if (grid_points == 0) {
        throw ParameterError("LatticeSpace::grid: grid size must be positive");
    }
    return {OrderKind::FunctionGrid, grid_points};
}

LatticeElement LatticeSpace::zero() const {
    return LatticeElement(*this, std::vector<double>(dim_, 0.0));
}

LatticeElement LatticeSpace::element(std::vector<double> coords) const {
    return LatticeElement(*this, std::move(coords));
}

LatticeElement LatticeSpace::element(double value) const {
    if (dim_ != 1) {
        throw DimensionError("LatticeSpace::element(double): space is not scalar");
    }
    return LatticeElement(*this, {value});
}

LatticeElement LatticeSpace::sample_function(const std::function<double(double)>& f) const {
    if (kind_ != OrderKind::FunctionGrid) {
        throw DimensionError("sample_function: space is not a function grid");
    }
    std::vector<double> coords(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        const double t = dim_ == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(dim_ - 1);
        coords[i] = f(t);
    }
    return LatticeElement(*this, std::move(coords));
}

std::string LatticeSpace::describe() const {
    std::ostringstream os;
    os << kind_name(kind_) << "[" << dim_ << "]";
    return os.str();
}

LatticeElement::LatticeElement(LatticeSpace space, std::vector<double> coords)
    : space_(space), coords_(std::move(coords)) {
    if (coords_.size() != space_.dimension()) {
        std::ostringstream os;
        os << "LatticeElement: " << coords_.size() << " coordinates given for space "
           << space_.describe();
        throw DimensionError(os.str());
    }
}

double LatticeElement::scalar_value() const {
    if (coords_.size() != 1) {
        throw DimensionError("scalar_value: element is not scalar (" + space_.describe() + ")");
    }
    return coords_[0];
}

std::string LatticeElement::describe() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (i > 0) os << ", ";
        os << coords_[i];
    }
    os << ")";
    return os.str();
}

bool leq(const LatticeElement& x, const LatticeElement& y) {
    require_same_space(x, y, "leq");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] <= y[i])) return false;
    }
    return true;
}

LatticeElement join(const LatticeElement& x, const LatticeElement& y) {
    require_same_space(x, y, "join");
    std::vector<double> coords(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) coords[i] = std::max(x[i], y[i]);
    return LatticeElement(x.space(), std::move(coords));
}

LatticeElement meet(const LatticeElement& x, const LatticeElement& y) {
    require_same_space(x, y, "meet");
    std::vector<double> coords(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) coords[i] = std::min(x[i], y[i]);
    return LatticeElement(x.space(), std::move(coords));
}

LatticeElement add(const LatticeElement& x, const LatticeElement& y) {
    require_same_space(x, y, "add");
    std::vector<double> coords(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) coords[i] = x[i] + y[i];
    return LatticeElement(x.space(), std::move(coords));
}

LatticeElement subtract(const LatticeElement& x, const LatticeElement& y) {
    require_same_space(x, y, "subtract");
    std::vector<double> coords(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) coords[i] = x[i] - y[i];
    return LatticeElement(x.space(), std::move(coords));
}

LatticeElement scale(double omega, const LatticeElement& x) {
    if (!std::isfinite(omega)) {
        throw ParameterError("scale: scalar must be finite");
    }
    std::vector<double> coords(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) coords[i] = omega * x[i];
    return LatticeElement(x.space(), std::move(coords));
}

bool is_nonnegative(const LatticeElement& x, double slack) {
    for (double c : x.coords()) {
        if (!(c >= -slack)) return false;
    }
    return true;
}

bool approx_equal(const LatticeElement& x, const LatticeElement& y, double tau) {
    if (x.space() != y.space()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(std::abs(x[i] - y[i]) <= tau)) return false;
    }
    return true;
}

double max_abs_coordinate(const LatticeElement& x) {
    double m = 0.0;
    for (double c : x.coords()) m = std::max(m, std::abs(c));
    return m;
}

ProbeReport archimedean_probe(const LatticeElement& x, std::size_t n_max,
                              double early_exit_gauge) {
    if (n_max == 0) {
        throw ParameterError("archimedean_probe: n_max must be positive");
    }
    if (!is_nonnegative(x)) {
        throw DomainError("archimedean_probe: element is not in V+ " + x.describe());
    }
    ProbeReport report;
    report.terms.reserve(std::min<std::size_t>(n_max, 1024));
    for (std::size_t n = 1; n <= n_max; ++n) {
        LatticeElement term = scale(1.0 / static_cast<double>(n), x);
        const double g = max_abs_coordinate(term);
        if (!report.terms.empty() && !leq(term, report.terms.back())) {
            report.decreasing = false;
        }
        report.terms.push_back(std::move(term));
        report.gauges.push_back(g);
        if (g < early_exit_gauge) break;
    }
    report.final_gauge = report.gauges.back();
    return report;
}

bool contraction_collapse_check(const LatticeElement& x, double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        throw ParameterError("contraction_collapse_check: gamma must lie in [0, 1)");
    }
    if (!is_nonnegative(x)) {
        throw DomainError("contraction_collapse_check: element is not in V+ " + x.describe());
    }
    if (!leq(x, scale(gamma, x))) return true; // premise false, vacuously true
    for (double c : x.coords()) {
        if (c != 0.0) return false;
    }
    return true;
}

} // namespace vsms

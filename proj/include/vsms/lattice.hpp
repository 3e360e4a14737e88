#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vsms/errors.hpp"

namespace vsms {

/// Coordinate-equality tolerance for values produced by floating-point
/// arithmetic chains. Constructed values are compared exactly.
inline constexpr double default_tau_eq = 1e-12;

/// Depth of the Archimedean probe when none is requested explicitly.
inline constexpr std::size_t default_probe_depth = 1'000'000;

/// How a concrete lattice instance orders its coordinates. All three are
/// finite-dimensional with componentwise order; the kind records intent:
/// Scalar is R, Componentwise is R^d, FunctionGrid is R^g obtained by
/// sampling functions on a uniform grid over [0,1].
enum class OrderKind { Scalar, Componentwise, FunctionGrid };

class LatticeElement;

/// An Archimedean linear lattice (Riesz space) descriptor. Immutable value;
/// two descriptors with equal kind and dimension denote the same space.
class LatticeSpace {
public:
    static LatticeSpace scalar() { return {OrderKind::Scalar, 1}; }
    static LatticeSpace vector(std::size_t dimension);
    static LatticeSpace grid(std::size_t grid_points);

    OrderKind kind() const { return kind_; }
    std::size_t dimension() const { return dim_; }

    LatticeElement zero() const;
    LatticeElement element(std::vector<double> coords) const;
    /// Scalar-space convenience.
    LatticeElement element(double value) const;
    /// FunctionGrid spaces: sample f on the uniform grid over [0,1].
    LatticeElement sample_function(const std::function<double(double)>& f) const;

    bool operator==(const LatticeSpace&) const = default;

    std::string describe() const;

private:
    LatticeSpace(OrderKind kind, std::size_t dim) : kind_(kind), dim_(dim) {}

    OrderKind kind_;
    std::size_t dim_;
};

/// An element of one LatticeSpace. Immutable after construction; all
/// operations are pure, so elements are safe to share across threads.
class LatticeElement {
public:
    LatticeElement(LatticeSpace space, std::vector<double> coords);

    const LatticeSpace& space() const { return space_; }
    std::span<const double> coords() const { return coords_; }
    std::size_t size() const { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }

    /// The single coordinate of a scalar-space element.
    double scalar_value() const;

    std::string describe() const;

private:
    LatticeSpace space_;
    std::vector<double> coords_;
};

/// Partial order: true iff every coordinate of x is <= the matching
/// coordinate of y. Incomparable pairs answer false in both directions.
bool leq(const LatticeElement& x, const LatticeElement& y);

/// Componentwise supremum / infimum.
LatticeElement join(const LatticeElement& x, const LatticeElement& y);
LatticeElement meet(const LatticeElement& x, const LatticeElement& y);

LatticeElement add(const LatticeElement& x, const LatticeElement& y);
LatticeElement subtract(const LatticeElement& x, const LatticeElement& y);
LatticeElement scale(double omega, const LatticeElement& x);

/// Membership in the positive cone V+ (every coordinate >= -slack).
bool is_nonnegative(const LatticeElement& x, double slack = 0.0);

/// Componentwise |x_i - y_i| <= tau. Elements of different spaces compare
/// unequal rather than raising.
bool approx_equal(const LatticeElement& x, const LatticeElement& y,
                  double tau = default_tau_eq);

/// Largest absolute coordinate. This is the default Gauge rule; it is
/// order-monotone on the positive cone, where all residual values live.
double max_abs_coordinate(const LatticeElement& x);

/// Result of the truncated Archimedean probe: the terms (1/n)x, their
/// gauges, and whether the sequence decreases in the lattice order.
struct ProbeReport {
    std::vector<LatticeElement> terms;
    std::vector<double> gauges;
    bool decreasing = true;
    double final_gauge = 0.0;
};

/// Evaluate (1/n)x for n = 1..n_max with early exit once the gauge of a
/// term falls below early_exit_gauge. Requires x in V+.
ProbeReport archimedean_probe(const LatticeElement& x,
                              std::size_t n_max = default_probe_depth,
                              double early_exit_gauge = default_tau_eq);

/// Regression hook for the order-theoretic fact that x <= gamma*x with
/// 0 <= gamma < 1 forces x = 0 on the positive cone. True on every
/// concrete instance; the check evaluates the implication directly.
bool contraction_collapse_check(const LatticeElement& x, double gamma);

} // namespace vsms

#pragma once

#include <stdexcept>
#include <string>

namespace vsms {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands live in different lattice spaces (shape/kind mismatch).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A point or element is outside the domain an operation requires
/// (carrier escape, negative element where V+ is expected, t < 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A scalar parameter violates its contract (gamma outside [0,1),
/// negative coefficient, infeasible coefficient tuple, zero budget, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A value produced by p or q admits no k-preimage within tolerance.
class RangeContainmentError : public Error {
public:
    using Error::Error;
};

/// An operation requires a scalar-valued metric but was given another target.
class UnsupportedLatticeError : public Error {
public:
    using Error::Error;
};

/// Scenario document rejected; message names the first offending field.
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace vsms

#pragma once

#include <stdexcept>
#include <string>

namespace hemi {

/// Base of every error raised by the library. Each subclass maps to one
/// failure category so callers (and the CLI) can dispatch on type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (k out of
/// range, epsilon outside (0, 1/2), |x| > delta, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A strict positivity precondition failed. `index` is the first offending
/// 1-based position (e.g. the first j with sigma_j <= 0).
class PreconditionError : public Error {
public:
    PreconditionError(const std::string& what, int index)
        : Error(what), index_(index) {}
    [[nodiscard]] int index() const noexcept { return index_; }

private:
    int index_;
};

/// Derivative or value requested where the provider cannot supply it.
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// A point lies outside the upper half-space model (x^{n+1} <= 0).
class AmbientError : public Error {
public:
    using Error::Error;
};

/// Metric not positive definite, or some other broken geometric input.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Sphere not contained in the upper half-space (q <= a).
class NotContainedError : public Error {
public:
    using Error::Error;
};

/// Bad numerical configuration (grid too coarse, unsupported dimension).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// z(psi) <= 0 somewhere: the quasilinear operator is not elliptic there.
class EllipticityError : public Error {
public:
    using Error::Error;
};

/// Malformed or degenerate triangle mesh.
class MeshError : public Error {
public:
    using Error::Error;
};

/// Sliding family never touched the mesh before reaching q_min.
class NoContactError : public Error {
public:
    using Error::Error;
};

/// Ascending plane only touches the mesh along its boundary.
class DegenerateContactError : public Error {
public:
    using Error::Error;
};

} // namespace hemi

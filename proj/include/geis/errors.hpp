#pragma once

#include <stdexcept>
#include <string>

namespace geis {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two grid functions (or a function and an operator) live on different grids.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The mollifier scale is not resolved by the grid.
class ResolutionError : public Error {
public:
    ResolutionError(const std::string& what, int max_usable_n)
        : Error(what), max_usable_n_(max_usable_n) {}
    int max_usable_n() const noexcept { return max_usable_n_; }

private:
    int max_usable_n_;
};

/// A symbol returned a non-finite value.
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// lambda is too close to the sampled spectrum of a multiplier.
class ResolventSingularity : public Error {
public:
    ResolventSingularity(const std::string& what, double xi, double distance)
        : Error(what), xi_(xi), distance_(distance) {}
    double xi() const noexcept { return xi_; }
    double distance() const noexcept { return distance_; }

private:
    double xi_;
    double distance_;
};

class UnsupportedFamily : public Error {
public:
    using Error::Error;
};

/// A sampled family violates a standing hypothesis of the constructor.
class HypothesisViolation : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

/// A space-time test function is not compactly supported where required.
class TestFunctionError : public Error {
public:
    using Error::Error;
};

/// exp(t * Re a) would overflow on the requested time horizon.
class OverflowGuard : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line = 0) : Error(what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace geis

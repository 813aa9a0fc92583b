#pragma once

#include <stdexcept>
#include <string>

namespace sqg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (s out of range, d <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Two vortices coincide, or a kernel is evaluated at its singular point.
class SingularityError : public Error {
public:
    using Error::Error;
};

/// An iterative solver failed to reach its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double last_residual)
        : Error(what), last_residual_(last_residual) {}
    double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

/// Malformed run configuration (parse errors, unknown or duplicate keys).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace sqg

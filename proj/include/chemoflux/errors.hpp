#pragma once

#include <stdexcept>
#include <string>

namespace chemoflux {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid configuration document or parameter set. Carries the key path
/// and source line in the message.
struct ConfigError : Error {
    using Error::Error;
};

/// Iterative or direct solve failed to reach the requested tolerance.
struct SolverError : Error {
    SolverError(const std::string& what, double residual_)
        : Error(what), residual(residual_) {}
    double residual = 0.0;
};

/// A field was used with a grid it does not belong to.
struct GridMismatch : Error {
    using Error::Error;
};

/// NaN or Inf detected where a finite value is required.
struct NonFiniteError : Error {
    using Error::Error;
};

} // namespace chemoflux

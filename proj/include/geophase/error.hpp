#pragma once

#include <stdexcept>
#include <string>

namespace geophase {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input: malformed trajectory, unreachable target, open loop, bad config.
/// The CLI maps this to exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure could not deliver a trustworthy answer
/// (truncation leakage, orthogonal overlap, internal inconsistency).
/// The CLI maps this to exit code 3.
class NumericalError : public Error {
public:
    using Error::Error;
};

class InvalidTrajectoryError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class SingularDetuningError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class UnreachablePhaseError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class OutOfRangeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class UnsupportedError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// The drive does not return the oscillator to its starting point.
class NotClosedError : public ValidationError {
public:
    NotClosedError(const std::string& what, double residual)
        : ValidationError(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class TruncationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class UndefinedPhaseError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConsistencyError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace geophase

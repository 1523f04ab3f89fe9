#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rrk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad argument or precondition violation.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Unknown method, problem, or other named entity.
class LookupError : public Error {
public:
    using Error::Error;
};

/// Operation not supported for this input (implicit tableau, missing exact solution, ...).
class CapabilityError : public Error {
public:
    using Error::Error;
};

/// Malformed input file.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Numerical failure during time stepping. Carries the stage or step index when known.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, std::ptrdiff_t index = -1)
        : Error(what), index_(index) {}

    std::ptrdiff_t index() const { return index_; }

private:
    std::ptrdiff_t index_;
};

class NonFiniteStateError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonpositiveGammaError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// State for which the right-hand side is undefined (e.g. the origin for the oscillator).
class SingularStateError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class RunawayError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace rrk

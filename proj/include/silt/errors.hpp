#pragma once

#include <stdexcept>
#include <string>

namespace silt {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input: out-of-range times, mismatched spaces, unknown names.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// The numbers cannot be trusted: degenerate Gram matrices, failed
/// self-checks, non-convergence.
class NumericalError : public Error {
public:
    using Error::Error;
};

class DegenerateGramError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Two independent evaluation routes disagreed beyond tolerance.
class ConsistencyError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace silt

#pragma once

#include <stdexcept>
#include <string>

namespace tseb {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes or indices do not agree with the model dimensions.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// A value is outside its admissible range (NaN, probability > 1, ...).
class InvalidInputError : public Error {
public:
    using Error::Error;
};

/// A numerical routine failed to produce an accurate answer.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// The caller broke a precondition of the operation.
class ContractViolation : public Error {
public:
    using Error::Error;
};

} // namespace tseb

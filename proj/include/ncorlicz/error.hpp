#pragma once

#include <stdexcept>
#include <string>

namespace ncorlicz {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Violated precondition: shape mismatch, non-positive weight, non-Hermitian input, ...
class ValidationError : public Error {
public:
    using Error::Error;
};

// Iterative method did not converge (bisection cap, Jacobi sweep cap).
class NumericError : public Error {
public:
    using Error::Error;
};

// Malformed external input (JSON files, CLI arguments).
class InputError : public Error {
public:
    using Error::Error;
};

} // namespace ncorlicz

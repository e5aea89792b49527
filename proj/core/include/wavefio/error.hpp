#pragma once

#include <stdexcept>
#include <string>

namespace wavefio {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A precondition on an argument did not hold (sizes, ranges, parameters).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Two inputs that must agree in shape do not.
class SizeMismatch : public Error {
public:
    using Error::Error;
};

// Malformed or truncated file contents.
class FormatError : public Error {
public:
    using Error::Error;
};

// A numerical procedure could not produce a trustworthy result
// (rank deficiency, non-finite values, instability).
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace wavefio

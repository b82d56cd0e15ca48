#pragma once

#include <stdexcept>
#include <string>

namespace compcorr {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A caller-supplied argument violates a documented precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Two series (or a series and a composition) disagree on length.
class LengthMismatch : public Error {
public:
    using Error::Error;
};

// An exact integer result does not fit the result type.
class CountOverflow : public Error {
public:
    using Error::Error;
};

// A series id was not found in a dataset.
class LookupError : public Error {
public:
    using Error::Error;
};

// Malformed input text (dataset files, filter expressions, ranges).
class ParseError : public Error {
public:
    using Error::Error;
};

// A numerical consistency check failed; indicates a bug, not bad input.
class InternalError : public Error {
public:
    using Error::Error;
};

} // namespace compcorr

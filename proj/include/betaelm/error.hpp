#pragma once

#include <stdexcept>
#include <string>

namespace betaelm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed arguments: non-finite values, shape mismatches, bad ranges.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A matrix that cannot be rescaled because its spectral radius is zero.
class DegenerateMatrix : public Error {
public:
    using Error::Error;
};

/// Sampling ranges that can never produce u0 < u1.
class UnsatisfiableRanges : public Error {
public:
    using Error::Error;
};

/// Operation called on an object that does not support it
/// (e.g. a recurrent step on a feed-forward network).
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// Improvement rate against a zero baseline.
class UndefinedRate : public Error {
public:
    using Error::Error;
};

/// CSV or model-file parse failure. The message carries the location.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace betaelm

#pragma once

#include <stdexcept>
#include <string>

namespace amred {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad caller input: malformed files, invalid options, violated preconditions.
/// The CLI maps these to exit code 1.
class UsageError : public Error {
public:
    using Error::Error;
};

/// The numerics could not produce a result for otherwise valid input.
/// The CLI maps these to exit code 2.
class NumericalError : public Error {
public:
    using Error::Error;
};

class GridTooLarge : public UsageError {
public:
    using UsageError::UsageError;
};

class FormatError : public UsageError {
public:
    using UsageError::UsageError;
};

class DimensionMismatch : public UsageError {
public:
    using UsageError::UsageError;
};

class DegreeTooLarge : public UsageError {
public:
    using UsageError::UsageError;
};

class EvaluationFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class StalledAtStart : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegenerateManifold : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegenerateAbscissae : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class UndefinedDirection : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SegmentTangent : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NotSymmetric : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace amred

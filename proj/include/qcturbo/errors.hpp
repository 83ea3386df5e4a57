#pragma once

#include <stdexcept>
#include <string>

namespace qcturbo {

/// Bad inputs, violated invariants, malformed files. CLI exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A randomized construction exhausted its attempt budget. CLI exit code 3.
class ConstructionError : public std::runtime_error {
public:
    explicit ConstructionError(const std::string& what) : std::runtime_error(what) {}
};

/// A request whose cost exceeds the documented desk-scale limits. CLI exit code 4.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// Non-finite values where finite arithmetic is required.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Tail-biting is unsolvable at this block length (feedback period divides N).
class UnsupportedLengthError : public ValidationError {
public:
    UnsupportedLengthError(const std::string& what, int block_length, int feedback_period)
        : ValidationError(what), block_length(block_length), feedback_period(feedback_period) {}

    int block_length;
    int feedback_period;
};

} // namespace qcturbo

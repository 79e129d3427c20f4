#pragma once

#include <stdexcept>
#include <string>

namespace tailchain {

/// Invalid model parameters or arguments (CLI exit code 2).
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// File system / parsing failures (CLI exit code 3).
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failures: no root, starved estimators, degenerate input (CLI exit code 4).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Inputs that contradict each other, e.g. a tail index that does not
/// normalize the backward-increment law.
class ConsistencyError : public NumericalError {
public:
    explicit ConsistencyError(const std::string& msg) : NumericalError(msg) {}
};

} // namespace tailchain

#pragma once

#include <stdexcept>
#include <string>

namespace jumpsplit {

// Error taxonomy; the C API maps each type to a stable error code.

// Bad user-supplied value (parameter out of range, malformed config, ...).
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// A numeric routine left its supported regime (non-finite state, quadrature
// failure, sampler abort, ...).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Cholesky failed even after the full ridge escalation schedule.
class SingularSystemError : public NumericError {
public:
    explicit SingularSystemError(const std::string& what) : NumericError(what) {}
};

// Projected work exceeds a hard budget; carries the projection in the message.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// Config file / CLI input problems.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace jumpsplit

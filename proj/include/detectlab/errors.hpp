#pragma once

#include <stdexcept>
#include <string>

namespace detectlab {

// Raised when an experiment configuration fails validation. CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a result record violates a checked identity (Pinsker bound,
// error identity, monotonicity) just before emission. CLI exit code 3.
class InvariantViolation : public std::runtime_error {
public:
    explicit InvariantViolation(const std::string& what) : std::runtime_error(what) {}
};

// A source was asked to continue from a context it has no transition row for.
class MissingContextError : public std::runtime_error {
public:
    explicit MissingContextError(const std::string& what) : std::runtime_error(what) {}
};

// Exact enumeration was requested for a sequence space above the cap;
// callers should fall back to Monte Carlo estimation.
class EnumerationCapError : public std::runtime_error {
public:
    explicit EnumerationCapError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace detectlab

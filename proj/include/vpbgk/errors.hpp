#pragma once

#include <stdexcept>
#include <string>

namespace vpbgk {

// Raised for invalid configuration files, bad CLI overrides, or parameter
// values that violate a documented precondition. The CLI maps this to exit
// code 2; all other exceptions map to exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an internal consistency check fails (a bug, not user error).
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

} // namespace vpbgk

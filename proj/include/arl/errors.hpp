#pragma once

#include <stdexcept>
#include <string>

namespace arl {

// Invalid configuration, shape mismatch, malformed input. CLI maps this to
// its own exit code, distinct from runtime faults.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A fault while a run is in progress (environment failure, I/O error).
class RuntimeFault : public std::runtime_error {
public:
    explicit RuntimeFault(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace arl

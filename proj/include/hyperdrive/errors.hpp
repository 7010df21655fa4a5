#pragma once

#include <stdexcept>
#include <string>

namespace hyperdrive {

/// Invalid configuration, scenario file, or constructor argument.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Unknown node, task, or data-source identifier.
struct LookupError : std::runtime_error {
  explicit LookupError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Scheduling pipeline misuse (unanchored task, unplaced predecessor).
struct SchedulingError : std::runtime_error {
  explicit SchedulingError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hyperdrive

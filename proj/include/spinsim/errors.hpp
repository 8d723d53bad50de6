#pragma once

#include <stdexcept>
#include <string>

namespace spinsim {

/// Bad user input: config files, CLI arguments, parameter structs that fail
/// their validate() checks. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure at runtime (integrator blow-up, state invariant broken
/// beyond repair). The CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace spinsim

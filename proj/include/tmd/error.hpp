#pragma once

#include <stdexcept>
#include <string>

namespace tmd {

// Bad user input: flags, geometry, missing files, unusable run settings.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or incomplete parameter files.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite values produced during a force evaluation.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tmd

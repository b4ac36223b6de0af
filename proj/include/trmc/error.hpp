#pragma once

#include <stdexcept>
#include <string>

namespace trmc {

// Precondition or invariant failure inside the numerical core.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace trmc

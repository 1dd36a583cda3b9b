#pragma once

#include <stdexcept>
#include <string>

namespace ddsplit {

// Invalid configuration or arguments (grid sizes, mismatched operands, bad
// partition geometry).
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// An iterative method failed to reach its tolerance. Carries the last
// residual seen so callers can report how far off it was.
class NumericalError : public std::runtime_error {
public:
  NumericalError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

}  // namespace ddsplit

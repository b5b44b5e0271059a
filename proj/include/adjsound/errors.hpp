#pragma once

#include <stdexcept>
#include <string>

namespace adjsound {

/// Invalid user input: bad extents, malformed config, out-of-domain positions.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solver blow-up or inadmissible state (NaN, rho <= 0, p <= 0, zero pivot).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched grids, step counts or component counts between operands.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace adjsound

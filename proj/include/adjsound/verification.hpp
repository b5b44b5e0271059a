#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace adjsound {

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
  std::string detail;
};

/// Observed order of the compact first derivative on sin(2 pi x) over x in [0.25, 0.75],
/// 32 -> 64 -> 128 nodes.
CheckResult check_scheme_order();
/// Observed order of RK4 on the harmonic oscillator.
CheckResult check_rk4_order();
/// Relative deviation of the pulse front speed (arrival times at two radii) from c on an n^2 grid.
CheckResult check_propagation_speed(int n = 128);
/// Residual acoustic energy fraction after a pulse leaves an n^2 domain.
CheckResult check_boundary_reflection(int n = 64);
/// Relative mismatch of the tangent-linear and adjoint inner products on n^2
/// (50 steps at n = 32, proportionally more on finer grids).
CheckResult check_duality(std::uint64_t seed, int n = 32);

struct GradientCheckOptions {
  int nodes = 32;
  std::size_t steps = 160;
  int samples = 4;
};

/// Largest relative error of the adjoint gradient against central differences
/// at random samples where |grad| is at least a tenth of its maximum.
CheckResult check_gradient(std::uint64_t seed, const GradientCheckOptions& options = {});

std::vector<CheckResult> run_verification_suite(std::uint64_t seed);

}  // namespace adjsound

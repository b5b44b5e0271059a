#pragma once

#include <array>
#include <cstddef>

#include "adjsound/field.hpp"
#include "adjsound/grid.hpp"
#include "adjsound/tridiagonal.hpp"

namespace adjsound {

/**
 * Tridiagonal sixth-order compact first derivative.
 *
 * Interior rows: alpha f'[i-1] + f'[i] + alpha f'[i+1]
 *   = a (f[i+1] - f[i-1]) / 2h + b (f[i+2] - f[i-2]) / 4h
 * with alpha = 1/3, a = 14/9, b = 1/9. Closures: third order one-sided at
 * the end nodes (f'0 + 2 f'1 = (-5/2 f0 + 2 f1 + 1/2 f2) / h), fourth order
 * Pade at the next nodes. Stencils are written as differences so constants
 * differentiate to exact zeros.
 */
class CompactScheme {
 public:
  static constexpr double kAlpha = 1.0 / 3.0;
  static constexpr double kA = 14.0 / 9.0;
  static constexpr double kB = 1.0 / 9.0;

  CompactScheme() = default;
  explicit CompactScheme(const Grid& grid);

  const Grid& grid() const { return grid_; }
  const TridiagonalLU& factors(int axis) const { return lu_[axis]; }

  /// df = d f / d x_axis for grid-sized arrays f and df (must not alias).
  void derivative(const double* f, double* df, int axis) const;
  ScalarField derivative(const ScalarField& f, int axis) const;

  /// Explicit fourth-order one-sided derivative at the end node of the line
  /// through `node`; side 0 = low face, 1 = high face.
  double boundary_derivative(const double* f, std::size_t node, int axis, int side) const;

  /// Left-hand side of the scheme for a line of `length` nodes.
  static TridiagonalLU lhs(std::size_t length);

 private:
  Grid grid_;
  std::array<TridiagonalLU, 3> lu_;
};

ScalarField compact_d1(const ScalarField& field, int axis, const CompactScheme& scheme);

/**
 * Implicit sixth-order low-pass filter (tridiagonal, parameter alpha_f).
 *
 * Interior rows are sixth order, the second and third nodes from each end
 * use the second- and fourth-order members of the same family, the end
 * nodes are left unfiltered. The update is solved for the increment, so
 * constants pass through bit-exactly. The right-hand side of every
 * filtered row vanishes for the odd-even mode.
 */
class CompactFilter {
 public:
  static constexpr double kDefaultAlpha = 0.49;

  CompactFilter() = default;
  CompactFilter(const Grid& grid, double alpha_f = kDefaultAlpha);

  double alpha() const { return alpha_; }
  const Grid& grid() const { return grid_; }

  void apply_in_place(double* f, int axis) const;
  ScalarField apply(const ScalarField& f, int axis) const;

  static TridiagonalLU lhs(std::size_t length, double alpha_f);

 private:
  Grid grid_;
  double alpha_ = kDefaultAlpha;
  std::array<TridiagonalLU, 3> lu_;
};

ScalarField compact_filter_apply(const ScalarField& field, int axis, const CompactFilter& filter);

}  // namespace adjsound

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace adjsound {

/**
 * LU factors of a tridiagonal matrix (Thomas algorithm, no pivoting).
 *
 * Row m reads sub[m] x[m-1] + diag[m] x[m] + super[m] x[m+1]; sub[0] and
 * super[n-1] are ignored. Factor once, solve many: the compact schemes keep
 * one instance per axis length. A zero pivot throws NumericalError.
 */
class TridiagonalLU {
 public:
  TridiagonalLU() = default;
  TridiagonalLU(std::vector<double> sub, std::vector<double> diag, std::vector<double> super);

  std::size_t size() const { return diag_.size(); }

  void solve_in_place(std::span<double> x) const;

  /// Solves `batch` interleaved systems: element m of system r lives at
  /// x[m * stride + r]. Used for grid lines that are not contiguous.
  void solve_strided(double* x, std::size_t stride, std::size_t batch) const;

  std::vector<double> multiply(std::span<const double> x) const;

 private:
  std::vector<double> sub_;
  std::vector<double> diag_;
  std::vector<double> super_;
  std::vector<double> upper_;  // modified super-diagonal
  std::vector<double> inv_;    // reciprocal pivots
};

/// x with A x = rhs.
std::vector<double> tridiagonal_solve(const TridiagonalLU& lhs, std::span<const double> rhs);

}  // namespace adjsound

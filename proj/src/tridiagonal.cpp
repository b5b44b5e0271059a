#include "adjsound/tridiagonal.hpp"

#include <cmath>
#include <string>

#include "adjsound/errors.hpp"

namespace adjsound {

TridiagonalLU::TridiagonalLU(std::vector<double> sub, std::vector<double> diag,
                             std::vector<double> super)
    : sub_(std::move(sub)), diag_(std::move(diag)), super_(std::move(super)) {
  const std::size_t n = diag_.size();
  if (sub_.size() != n || super_.size() != n || n == 0) {
    throw ShapeError("tridiagonal: band lengths must match and be non-zero");
  }
  upper_.assign(n, 0.0);
  inv_.assign(n, 0.0);
  double prev_upper = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    const double pivot = diag_[m] - (m > 0 ? sub_[m] * prev_upper : 0.0);
    if (pivot == 0.0 || !std::isfinite(pivot)) {
      throw NumericalError("tridiagonal: zero pivot in row " + std::to_string(m));
    }
    inv_[m] = 1.0 / pivot;
    upper_[m] = (m + 1 < n) ? super_[m] * inv_[m] : 0.0;
    prev_upper = upper_[m];
  }
}

void TridiagonalLU::solve_in_place(std::span<double> x) const {
  solve_strided(x.data(), 1, 1);
}

void TridiagonalLU::solve_strided(double* x, std::size_t stride, std::size_t batch) const {
  const std::size_t n = diag_.size();
  {
    const double inv0 = inv_[0];
    for (std::size_t r = 0; r < batch; ++r) x[r] *= inv0;
  }
  for (std::size_t m = 1; m < n; ++m) {
    const double a = sub_[m];
    const double inv = inv_[m];
    double* cur = x + m * stride;
    const double* prev = cur - stride;
    for (std::size_t r = 0; r < batch; ++r) cur[r] = (cur[r] - a * prev[r]) * inv;
  }
  for (std::size_t m = n - 1; m-- > 0;) {
    const double c = upper_[m];
    double* cur = x + m * stride;
    const double* next = cur + stride;
    for (std::size_t r = 0; r < batch; ++r) cur[r] -= c * next[r];
  }
}

std::vector<double> TridiagonalLU::multiply(std::span<const double> x) const {
  const std::size_t n = diag_.size();
  if (x.size() != n) throw ShapeError("tridiagonal: vector length mismatch");
  std::vector<double> y(n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    double v = diag_[m] * x[m];
    if (m > 0) v += sub_[m] * x[m - 1];
    if (m + 1 < n) v += super_[m] * x[m + 1];
    y[m] = v;
  }
  return y;
}

std::vector<double> tridiagonal_solve(const TridiagonalLU& lhs, std::span<const double> rhs) {
  if (rhs.size() != lhs.size()) throw ShapeError("tridiagonal: rhs length mismatch");
  std::vector<double> x(rhs.begin(), rhs.end());
  lhs.solve_in_place(x);
  return x;
}

}  // namespace adjsound

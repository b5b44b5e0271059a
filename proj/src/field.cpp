#include "adjsound/field.hpp"

#include <algorithm>
#include <cmath>

#include "adjsound/errors.hpp"

namespace adjsound {

void ScalarField::fill(double v) { std::fill(values_.begin(), values_.end(), v); }

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::integral() const {
  CompensatedSum s;
  for (double v : values_) s.add(v);
  return s.value() * grid_.cell_measure();
}

StateField quiescent_state(const Grid& grid, const GasModel& gas) {
  StateField q(grid);
  q.rho().fill(gas.rho_ref);
  q.p().fill(gas.p_ref);
  return q;
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    carry_ += (sum_ - t) + x;
  } else {
    carry_ += (x - t) + sum_;
  }
  sum_ = t;
}

double spatial_inner_product(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid() == b.grid())) throw ShapeError("inner_product: grid mismatch");
  CompensatedSum s;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) s.add(a[i] * b[i]);
  return s.value() * a.grid().cell_measure();
}

double inner_product(std::span<const ScalarField> a, std::span<const ScalarField> b, double dt) {
  if (a.size() != b.size()) throw ShapeError("inner_product: time level count mismatch");
  CompensatedSum total;
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (!(a[n].grid() == b[n].grid())) throw ShapeError("inner_product: grid mismatch");
    CompensatedSum level;
    const std::size_t m = a[n].size();
    for (std::size_t i = 0; i < m; ++i) level.add(a[n][i] * b[n][i]);
    total.add(level.value());
  }
  const double measure = a.empty() ? 1.0 : a.front().grid().cell_measure();
  return total.value() * measure * dt;
}

}  // namespace adjsound

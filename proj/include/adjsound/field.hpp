#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "adjsound/grid.hpp"

namespace adjsound {

/// One real value per grid node.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid& grid, double value = 0.0)
      : grid_(grid), values_(grid.size(), value) {}

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& at(int i, int j, int k = 0) { return values_[grid_.index(i, j, k)]; }
  double at(int i, int j, int k = 0) const { return values_[grid_.index(i, j, k)]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }

  void fill(double v);
  bool all_finite() const;
  double max_abs() const;
  /// Sum of values times the cell measure.
  double integral() const;

  bool operator==(const ScalarField&) const = default;

 private:
  Grid grid_;
  std::vector<double> values_;
};

/**
 * A fixed set of d + 2 scalar fields on one grid, ordered
 * [density-like, velocity-like per axis, pressure-like].
 *
 * The tag separates physical states from adjoint states and tangent-linear
 * perturbations at compile time; all share the same layout.
 */
template <class Tag>
class FieldSet {
 public:
  FieldSet() = default;
  explicit FieldSet(const Grid& grid) : grid_(grid) {
    components_.assign(grid.dim() + 2, ScalarField(grid));
  }

  const Grid& grid() const { return grid_; }
  int num_components() const { return static_cast<int>(components_.size()); }
  ScalarField& component(int c) { return components_[c]; }
  const ScalarField& component(int c) const { return components_[c]; }

  ScalarField& rho() { return components_.front(); }
  const ScalarField& rho() const { return components_.front(); }
  ScalarField& u(int axis) { return components_[1 + axis]; }
  const ScalarField& u(int axis) const { return components_[1 + axis]; }
  ScalarField& p() { return components_.back(); }
  const ScalarField& p() const { return components_.back(); }

  int pressure_index() const { return num_components() - 1; }

  void fill(double v) {
    for (auto& c : components_) c.fill(v);
  }
  /// First non-finite component name, or empty when all finite.
  std::string first_nonfinite_component() const {
    for (int c = 0; c < num_components(); ++c) {
      if (!components_[c].all_finite()) return component_name(c, num_components());
    }
    return {};
  }
  double max_abs() const {
    double m = 0.0;
    for (const auto& c : components_) m = std::max(m, c.max_abs());
    return m;
  }

  /// this = x + a * k
  void assign_axpy(const FieldSet& x, double a, const FieldSet& k) {
    for (int c = 0; c < num_components(); ++c) {
      double* out = components_[c].data();
      const double* xs = x.components_[c].data();
      const double* ks = k.components_[c].data();
      const std::size_t n = components_[c].size();
      for (std::size_t i = 0; i < n; ++i) out[i] = xs[i] + a * ks[i];
    }
  }
  /// this += a * k
  void add_scaled(double a, const FieldSet& k) {
    for (int c = 0; c < num_components(); ++c) {
      double* out = components_[c].data();
      const double* ks = k.components_[c].data();
      const std::size_t n = components_[c].size();
      for (std::size_t i = 0; i < n; ++i) out[i] += a * ks[i];
    }
  }
  void scale(double a) {
    for (auto& comp : components_) {
      for (double& v : comp.values()) v *= a;
    }
  }

  static std::string component_name(int c, int ncomp) {
    if (c == 0) return "rho";
    if (c == ncomp - 1) return "p";
    return "u" + std::to_string(c);
  }

  bool operator==(const FieldSet&) const = default;

 private:
  Grid grid_;
  std::vector<ScalarField> components_;
};

struct PhysicalTag {};
struct AdjointTag {};
struct PerturbationTag {};

/// Flow state q = [rho, u_j, p].
using StateField = FieldSet<PhysicalTag>;
/// Adjoint state q* = [rho*, u*_j, p*].
using AdjointStateField = FieldSet<AdjointTag>;
/// Tangent-linear perturbation (stored in conservative form, see tangent.hpp).
using PerturbationField = FieldSet<PerturbationTag>;

template <class Tag>
void assign_axpy(FieldSet<Tag>& out, const FieldSet<Tag>& x, double a, const FieldSet<Tag>& k) {
  out.assign_axpy(x, a, k);
}
template <class Tag>
void add_scaled(FieldSet<Tag>& out, double a, const FieldSet<Tag>& k) {
  out.add_scaled(a, k);
}

/// Quiescent state at the gas reference values.
StateField quiescent_state(const Grid& grid, const GasModel& gas);

/// Space-time samples of one scalar: one field per time level.
using SpaceTimeSamples = std::vector<ScalarField>;

/**
 * Discrete space-time inner product sum_n sum_x a*b * cell_measure * dt.
 *
 * Reduction order is fixed (nodes in storage order within each level, then
 * levels in order) with compensated summation, so results do not depend on
 * the worker count. Throws ShapeError on grid or level-count mismatch.
 */
double inner_product(std::span<const ScalarField> a, std::span<const ScalarField> b, double dt);

/// Spatial inner product sum_x a*b * cell_measure.
double spatial_inner_product(const ScalarField& a, const ScalarField& b);

/// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace adjsound

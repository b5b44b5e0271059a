#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "adjsound/boundary.hpp"
#include "adjsound/compact.hpp"
#include "adjsound/field.hpp"
#include "adjsound/grid.hpp"
#include "adjsound/rk4.hpp"
#include "adjsound/sources.hpp"

namespace adjsound {

/// How the forward trajectory is kept for the backward sweep.
enum class StoragePolicy { Auto, Full, Checkpointed };

struct SolverSettings {
  GasModel gas = GasModel::air();
  double sample_rate_hz = 48000.0;
  std::size_t steps = 0;
  bool filter_enabled = true;
  double filter_alpha = CompactFilter::kDefaultAlpha;
  bool characteristic_bcs = true;
  SpongeLayer sponge;
  StoragePolicy storage = StoragePolicy::Auto;
  /// Checkpoint spacing in steps; 0 picks about sqrt(steps).
  std::size_t checkpoint_stride = 0;
  /// Budget for full storage under StoragePolicy::Auto.
  double memory_budget_bytes = 1.5e9;

  double dt() const { return 1.0 / sample_rate_hz; }
  double duration() const { return static_cast<double>(steps) * dt(); }
};

/// Step count for a time span at a sample rate (nearest integer).
std::size_t step_count(double duration_s, double sample_rate_hz);

/// Throws ConfigError when c dt / min spacing exceeds 1, reporting the admissible dt.
void check_cfl(const Grid& grid, const GasModel& gas, double dt);

/// Everything about the discretization that is fixed for a run.
struct Discretization {
  Grid grid;
  SolverSettings settings;
  CompactScheme scheme;
  CompactFilter filter;
  ScalarField sponge;
  StateField reference;

  Discretization(const Grid& grid, const SolverSettings& settings);

  double dt() const { return settings.dt(); }
  const GasModel& gas() const { return settings.gas; }
};

/// Filters every component along every axis (no-op when filtering is disabled).
template <class Tag>
void apply_filter(const Discretization& disc, FieldSet<Tag>& q) {
  if (!disc.settings.filter_enabled) return;
  for (int c = 0; c < q.num_components(); ++c) {
    for (int a = 0; a < disc.grid.dim(); ++a) disc.filter.apply_in_place(q.component(c).data(), a);
  }
}

/// Throws NumericalError naming step, component and node for NaN/Inf or rho, p <= 0.
void check_state(const StateField& q, std::size_t step);

/**
 * Right-hand side of the Euler equations in pressure form for primitive
 * variables [rho, u_j, p].
 *
 * Conservative rates of [rho, rho u_j, p/(gamma-1)] are assembled from
 * compact derivatives of the fluxes plus u_i dp/dx_i in the energy row and
 * the monopole forcing, then converted to primitive rates. Boundary nodes
 * take the characteristic (non-reflecting) form of the normal contribution,
 * and the sponge relaxes toward the reference state.
 */
class EulerOperator {
 public:
  EulerOperator(std::shared_ptr<const Discretization> disc, SourceForcing forcing);

  /// out = scale * dq/dt at fractional time level `level`.
  void rate(const StateField& q, double level, StateField& out, double scale = 1.0);

  const Discretization& discretization() const { return *disc_; }
  const SourceForcing& forcing() const { return forcing_; }

 private:
  std::shared_ptr<const Discretization> disc_;
  SourceForcing forcing_;
  std::vector<std::vector<double>> flux_;
  std::vector<std::vector<double>> dflux_;
  std::vector<double> dp_;
  std::vector<std::vector<double>> acc_;
};

/// Convenience wrapper: allocates an operator and returns the rate at time level `level`.
StateField euler_rhs(const StateField& q, const SourceSet& sources, double level,
                     const std::shared_ptr<const Discretization>& disc);

/// Advances a state one RK4 step at a time, filtering after each step.
class ForwardStepper {
 public:
  ForwardStepper(std::shared_ptr<const Discretization> disc, SourceForcing forcing);

  /// q: level n -> level n + 1.
  void step(StateField& q, std::size_t n);

  const Discretization& discretization() const { return op_.discretization(); }

 private:
  EulerOperator op_;
  Rk4Integrator<StateField> rk_;
};

}  // namespace adjsound

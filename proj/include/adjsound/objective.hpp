#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "adjsound/blob.hpp"
#include "adjsound/field.hpp"
#include "adjsound/microphones.hpp"
#include "adjsound/sources.hpp"

namespace adjsound {

/// Weighted support with one target pressure trace (fluctuation, Pa) per time level.
struct Probe {
  std::string name;
  BlobStencil support;
  std::vector<double> target;
};

/**
 * Pressure-mismatch objective
 *
 *   J = 1/2 sum_n c_n sum_probes sum_x w(x) (p(x, t_n) - p_ref - target(t_n))^2 dV dt
 *
 * over the level window [window_begin, window_end] with trapezoid weights
 * c_n (1/2 at the window ends). The weight sigma is the sum of the probe
 * supports. The optional Tikhonov term adds lambda sum_k sum_n s_k(n)^2 dt.
 */
struct ObjectiveSpec {
  std::vector<Probe> probes;
  std::size_t window_begin = 0;
  std::size_t window_end = std::numeric_limits<std::size_t>::max();
  double regularization = 0.0;

  bool in_window(std::size_t n) const { return n >= window_begin && n <= window_end; }
  /// Trapezoid weight c_n for a run with `levels` time levels.
  double time_weight(std::size_t n, std::size_t levels) const;
  /// Sum of all probe supports as a field.
  ScalarField sigma(const Grid& grid) const;
};

/// One blob probe (half-width in meters) per microphone with the recorded trace as target.
ObjectiveSpec microphone_objective(const Grid& grid, const MicrophoneArray& array,
                                   const Recording& targets, double half_width);

/// One single-node probe per node where sigma > 0; targets are left empty.
std::vector<Probe> region_probes(const ScalarField& sigma);

/// Appends p - p_ref at each probe's first support node as the next target sample.
void record_probe_targets(std::vector<Probe>& probes, const ScalarField& pressure, double p_ref);

/// g = sum_probes w(x) (p(x) - p_ref - target(n)); zero outside the window.
ScalarField adjoint_forcing_g(const ScalarField& pressure, const ObjectiveSpec& objective,
                              std::size_t level, double p_ref);
/// Adds g at level n into g_out (grid-sized).
void add_adjoint_forcing(const ScalarField& pressure, const ObjectiveSpec& objective,
                         std::size_t level, double p_ref, double* g_out);

/// Contribution of time level n to J (already multiplied by c_n, dV and dt).
double objective_increment(const ScalarField& pressure, const ObjectiveSpec& objective,
                           std::size_t level, std::size_t levels, double p_ref, double dt);

/// lambda sum_k sum_n s_k(n)^2 dt.
double regularization_value(const SourceSet& sources, double lambda, double dt);

/**
 * Recording-based form: J = 1/2 sum_n c_n sum_m (rec_m(n) - target_m(n))^2 mass_m dV dt,
 * with channel m paired to probe m and mass_m the probe's support weight sum.
 */
double evaluate_objective(const Recording& recording, const ObjectiveSpec& objective,
                          const Grid& grid, double dt);

}  // namespace adjsound

#pragma once

#include "adjsound/field.hpp"
#include "adjsound/grid.hpp"

namespace adjsound {

/// Absorbing layer along every face: coeff = strength * ((W - d) / W)^degree for d < W nodes.
struct SpongeLayer {
  bool enabled = true;
  int width_nodes = 16;
  /// 1/s; 0 selects 2 c / (width * spacing) per axis.
  double strength_per_s = 0.0;
  int degree = 3;

  void validate() const;
  bool operator==(const SpongeLayer&) const = default;
};

/// Damping coefficient per node (faces combined by max); all zero when disabled.
ScalarField sponge_coefficients(const Grid& grid, const SpongeLayer& sponge, double sound_speed);

/// rate -= coeff * (state - reference), componentwise.
void apply_sponge(StateField& rate, const StateField& state, const StateField& reference,
                  const ScalarField& coeff);

/**
 * Non-reflecting treatment of one axis at one boundary node.
 *
 * `w` holds the primitive values [rho, u_1..u_d, p] at the node, `dw` their
 * derivatives normal to the face. The wave amplitudes of the one-dimensional
 * characteristic decomposition along `axis` are formed, those entering the
 * domain are set to zero, and the primitive-rate contribution of that axis is
 * written to `out` (d + 2 values). side 0 is the low face, 1 the high face.
 */
void characteristic_rate(const double* w, const double* dw, double gamma, int dim, int axis,
                         int side, double* out);

/**
 * Adjoint counterpart. `dlam` holds A^T d(q*)/dn (the adjoint variable paired
 * with the primitive perturbation). Amplitudes travel in reversed time, so
 * the opposite set is zeroed. Writes e (d + 2 values) such that the adjoint
 * rate contribution of this axis is -Atilde e.
 */
void adjoint_characteristic_rate(const double* w, const double* dlam, double gamma, int dim,
                                 int axis, int side, double* out);

}  // namespace adjsound

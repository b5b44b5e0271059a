#include "adjsound/boundary.hpp"

#include <algorithm>
#include <cmath>

#include "adjsound/errors.hpp"

namespace adjsound {

void SpongeLayer::validate() const {
  if (!enabled) return;
  if (width_nodes < 1) throw ConfigError("sponge.width_nodes must be >= 1");
  if (strength_per_s < 0.0) throw ConfigError("sponge.strength_per_s must be >= 0");
  if (degree < 1) throw ConfigError("sponge.degree must be >= 1");
}

ScalarField sponge_coefficients(const Grid& grid, const SpongeLayer& sponge, double sound_speed) {
  ScalarField coeff(grid);
  if (!sponge.enabled) return coeff;
  sponge.validate();
  const double w = sponge.width_nodes;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const Index3 ijk = grid.unravel(idx);
    double c = 0.0;
    for (int a = 0; a < grid.dim(); ++a) {
      const double strength = sponge.strength_per_s > 0.0
                                  ? sponge.strength_per_s
                                  : 2.0 * sound_speed / (w * grid.spacing(a));
      const int d = std::min(ijk[a], grid.count(a) - 1 - ijk[a]);
      if (d < sponge.width_nodes) c = std::max(c, strength * std::pow((w - d) / w, sponge.degree));
    }
    coeff[idx] = c;
  }
  return coeff;
}

void apply_sponge(StateField& rate, const StateField& state, const StateField& reference,
                  const ScalarField& coeff) {
  const double* s = coeff.data();
  const std::size_t n = coeff.size();
  for (int c = 0; c < rate.num_components(); ++c) {
    double* r = rate.component(c).data();
    const double* q = state.component(c).data();
    const double* q0 = reference.component(c).data();
    for (std::size_t i = 0; i < n; ++i) {
      if (s[i] != 0.0) r[i] -= s[i] * (q[i] - q0[i]);
    }
  }
}

namespace {

// Incoming on the low face means travelling in +x (speed > 0).
bool incoming(double speed, int side) { return side == 0 ? speed > 0.0 : speed < 0.0; }

}  // namespace

void characteristic_rate(const double* w, const double* dw, double gamma, int dim, int axis,
                         int side, double* out) {
  const int np = dim + 1;
  const double rho = w[0];
  const double p = w[np];
  const double un = w[1 + axis];
  const double c = std::sqrt(gamma * p / rho);
  const double rc = rho * c;
  const double drho = dw[0];
  const double dun = dw[1 + axis];
  const double dp = dw[np];

  double l1 = (un - c) * (dp - rc * dun);
  double l2 = un * (c * c * drho - dp);
  double l5 = (un + c) * (dp + rc * dun);
  if (incoming(un - c, side)) l1 = 0.0;
  if (incoming(un, side)) l2 = 0.0;
  if (incoming(un + c, side)) l5 = 0.0;

  out[0] = -(l2 + 0.5 * (l5 + l1)) / (c * c);
  out[1 + axis] = -(l5 - l1) / (2.0 * rc);
  out[np] = -0.5 * (l5 + l1);
  for (int t = 0; t < dim; ++t) {
    if (t == axis) continue;
    out[1 + t] = incoming(un, side) ? 0.0 : -un * dw[1 + t];
  }
}

void adjoint_characteristic_rate(const double* w, const double* dlam, double gamma, int dim,
                                 int axis, int side, double* out) {
  const int np = dim + 1;
  const double rho = w[0];
  const double p = w[np];
  const double un = w[1 + axis];
  const double c = std::sqrt(gamma * p / rho);
  const double rc = rho * c;
  const double lrho = dlam[0];
  const double lun = dlam[1 + axis];
  const double lp = dlam[np];

  // Amplitudes lambda_i (r_i . dlam) with r_i the right eigenvectors.
  double a1 = (un - c) * (lrho / (2.0 * c * c) - lun / (2.0 * rc) + 0.5 * lp);
  double a2 = un * lrho / (c * c);
  double a5 = (un + c) * (lrho / (2.0 * c * c) + lun / (2.0 * rc) + 0.5 * lp);
  // Reversed time: what leaves the domain forward enters it backward.
  if (incoming(-(un - c), side)) a1 = 0.0;
  if (incoming(-un, side)) a2 = 0.0;
  if (incoming(-(un + c), side)) a5 = 0.0;

  out[0] = c * c * a2;
  out[1 + axis] = rc * (a5 - a1);
  out[np] = a1 - a2 + a5;
  for (int t = 0; t < dim; ++t) {
    if (t == axis) continue;
    out[1 + t] = incoming(-un, side) ? 0.0 : un * dlam[1 + t];
  }
}

}  // namespace adjsound

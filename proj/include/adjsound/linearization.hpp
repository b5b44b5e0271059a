#pragma once

#include <array>

#include "adjsound/grid.hpp"

namespace adjsound {

/// Dense n x n matrix with n <= 5, row-major.
struct SmallMatrix {
  int n = 0;
  std::array<double, 25> a{};

  explicit SmallMatrix(int size = 0) : n(size) {}
  double& operator()(int i, int j) { return a[i * 5 + j]; }
  double operator()(int i, int j) const { return a[i * 5 + j]; }

  SmallMatrix transposed() const;
  SmallMatrix operator*(const SmallMatrix& other) const;
  double determinant() const;
  bool is_zero() const;
};

/**
 * Pointwise linearization of the pressure-form Euler system about a base
 * state q0 = [rho, u_j, p]:
 *
 *   d/dt (A dq) + d/dx_i (B^i dq) + C^i d/dx_i dq + dC^i d/dx_i p0 = ds
 *
 * A = dU/dq for U = [rho, rho u_j, p/(gamma-1)]; B^i is the Jacobian of the
 * flux along x_i; C^i has the single entry -u_i in the (energy, p) slot and
 * dC^i contributes -du_i times dp0/dx_i to the energy row. Indices follow
 * [rho, u_1..u_d, p], so matrices are 4 x 4 in 2D and 5 x 5 in 3D.
 */
struct LinearizationMatrices {
  int dim = 3;
  SmallMatrix A;
  SmallMatrix A_inverse;
  /// (A^T)^-1 in closed form.
  SmallMatrix A_tilde;
  std::array<SmallMatrix, 3> B;
  std::array<SmallMatrix, 3> C;
};

/// Throws NumericalError for rho <= 0.
LinearizationMatrices assemble_matrices(double rho, const Vec3& u, double p, const GasModel& gas,
                                        int dim);

}  // namespace adjsound

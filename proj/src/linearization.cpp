#include "adjsound/linearization.hpp"

#include <cmath>
#include <utility>

#include "adjsound/errors.hpp"

namespace adjsound {

SmallMatrix SmallMatrix::transposed() const {
  SmallMatrix t(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

SmallMatrix SmallMatrix::operator*(const SmallMatrix& other) const {
  SmallMatrix r(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += (*this)(i, k) * other(k, j);
      r(i, j) = s;
    }
  }
  return r;
}

double SmallMatrix::determinant() const {
  SmallMatrix m = *this;
  double det = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r) {
      if (std::abs(m(r, c)) > std::abs(m(piv, c))) piv = r;
    }
    if (m(piv, c) == 0.0) return 0.0;
    if (piv != c) {
      for (int k = 0; k < n; ++k) std::swap(m(c, k), m(piv, k));
      det = -det;
    }
    det *= m(c, c);
    for (int r = c + 1; r < n; ++r) {
      const double f = m(r, c) / m(c, c);
      for (int k = c; k < n; ++k) m(r, k) -= f * m(c, k);
    }
  }
  return det;
}

bool SmallMatrix::is_zero() const {
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if ((*this)(i, j) != 0.0) return false;
    }
  }
  return true;
}

LinearizationMatrices assemble_matrices(double rho, const Vec3& u, double p, const GasModel& gas,
                                        int dim) {
  if (!(rho > 0.0)) throw NumericalError("assemble_matrices: density must be positive");
  if (dim != 2 && dim != 3) throw ShapeError("assemble_matrices: dim must be 2 or 3");
  const int n = dim + 2;
  const int ip = dim + 1;
  const double gm1 = gas.gamma - 1.0;
  const double g1 = gas.gamma / gm1;

  LinearizationMatrices m;
  m.dim = dim;
  m.A = SmallMatrix(n);
  m.A(0, 0) = 1.0;
  for (int j = 0; j < dim; ++j) {
    m.A(1 + j, 0) = u[j];
    m.A(1 + j, 1 + j) = rho;
  }
  m.A(ip, ip) = 1.0 / gm1;

  m.A_inverse = SmallMatrix(n);
  m.A_inverse(0, 0) = 1.0;
  for (int j = 0; j < dim; ++j) {
    m.A_inverse(1 + j, 0) = -u[j] / rho;
    m.A_inverse(1 + j, 1 + j) = 1.0 / rho;
  }
  m.A_inverse(ip, ip) = gm1;
  m.A_tilde = m.A_inverse.transposed();

  for (int i = 0; i < dim; ++i) {
    SmallMatrix& b = m.B[i];
    b = SmallMatrix(n);
    b(0, 0) = u[i];
    b(0, 1 + i) = rho;
    for (int j = 0; j < dim; ++j) {
      b(1 + j, 0) = u[i] * u[j];
      b(1 + j, 1 + i) += rho * u[j];
      b(1 + j, 1 + j) += rho * u[i];
    }
    b(1 + i, ip) = 1.0;
    b(ip, 1 + i) = g1 * p;
    b(ip, ip) = g1 * u[i];

    m.C[i] = SmallMatrix(n);
    m.C[i](ip, ip) = -u[i];
  }
  for (int i = dim; i < 3; ++i) {
    m.B[i] = SmallMatrix(n);
    m.C[i] = SmallMatrix(n);
  }
  const double det = m.A.determinant();
  if (!(std::abs(det) > 0.0)) throw NumericalError("assemble_matrices: singular A");
  return m;
}

}  // namespace adjsound

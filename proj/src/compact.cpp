#include "adjsound/compact.hpp"

#include <string>
#include <vector>

#include "adjsound/errors.hpp"
#include "adjsound/parallel.hpp"

namespace adjsound {

namespace {

void check_axis(const Grid& grid, int axis) {
  if (axis < 0 || axis >= grid.dim()) {
    throw ShapeError("axis " + std::to_string(axis) + " out of range for a " +
                     std::to_string(grid.dim()) + "D grid");
  }
}

}  // namespace

TridiagonalLU CompactScheme::lhs(std::size_t n) {
  std::vector<double> sub(n, kAlpha), diag(n, 1.0), super(n, kAlpha);
  sub[0] = 0.0;
  super[0] = 2.0;
  sub[1] = 0.25;
  super[1] = 0.25;
  sub[n - 2] = 0.25;
  super[n - 2] = 0.25;
  sub[n - 1] = 2.0;
  super[n - 1] = 0.0;
  return TridiagonalLU(std::move(sub), std::move(diag), std::move(super));
}

CompactScheme::CompactScheme(const Grid& grid) : grid_(grid) {
  for (int a = 0; a < grid.dim(); ++a) {
    // Axes of equal length share one factorization.
    int same = -1;
    for (int b = 0; b < a; ++b) {
      if (grid.count(b) == grid.count(a)) same = b;
    }
    lu_[a] = same >= 0 ? lu_[same] : lhs(static_cast<std::size_t>(grid.count(a)));
  }
}

void CompactScheme::derivative(const double* f, double* df, int axis) const {
  check_axis(grid_, axis);
  const AxisLines lines(grid_, axis);
  const std::size_t n = lines.length;
  const std::size_t s = lines.stride;
  const double ih = 1.0 / grid_.spacing(axis);
  const double ca = 0.5 * kA * ih;
  const double cb = 0.25 * kB * ih;
  const TridiagonalLU& lu = lu_[axis];

  for_each_line_block(grid_, axis, [&](std::size_t base, std::size_t r0, std::size_t r1) {
    const double* fb = f + base;
    double* db = df + base;
    for (std::size_t r = r0; r < r1; ++r) {
      db[r] = (2.0 * (fb[s + r] - fb[r]) + 0.5 * (fb[2 * s + r] - fb[r])) * ih;
      db[s + r] = 0.75 * (fb[2 * s + r] - fb[r]) * ih;
    }
    for (std::size_t m = 2; m + 2 < n; ++m) {
      const double* fm2 = fb + (m - 2) * s;
      const double* fm1 = fb + (m - 1) * s;
      const double* fp1 = fb + (m + 1) * s;
      const double* fp2 = fb + (m + 2) * s;
      double* dm = db + m * s;
      for (std::size_t r = r0; r < r1; ++r) {
        dm[r] = ca * (fp1[r] - fm1[r]) + cb * (fp2[r] - fm2[r]);
      }
    }
    {
      const double* fe = fb + (n - 1) * s;
      const double* fe1 = fb + (n - 2) * s;
      const double* fe2 = fb + (n - 3) * s;
      double* de = db + (n - 1) * s;
      double* de1 = db + (n - 2) * s;
      for (std::size_t r = r0; r < r1; ++r) {
        de1[r] = 0.75 * (fe[r] - fe2[r]) * ih;
        de[r] = (2.0 * (fe[r] - fe1[r]) + 0.5 * (fe[r] - fe2[r])) * ih;
      }
    }
    lu.solve_strided(db + r0, s, r1 - r0);
  });
}

ScalarField CompactScheme::derivative(const ScalarField& f, int axis) const {
  if (!(f.grid() == grid_)) throw ShapeError("compact_d1: field grid differs from scheme grid");
  ScalarField out(grid_);
  derivative(f.data(), out.data(), axis);
  return out;
}

double CompactScheme::boundary_derivative(const double* f, std::size_t node, int axis,
                                          int side) const {
  const std::ptrdiff_t s = static_cast<std::ptrdiff_t>(grid_.stride(axis)) * (side == 0 ? 1 : -1);
  const double* p = f + node;
  const double f0 = p[0];
  const double d = 48.0 * (p[s] - f0) - 36.0 * (p[2 * s] - f0) + 16.0 * (p[3 * s] - f0) -
                   3.0 * (p[4 * s] - f0);
  const double v = d / (12.0 * grid_.spacing(axis));
  return side == 0 ? v : -v;
}

ScalarField compact_d1(const ScalarField& field, int axis, const CompactScheme& scheme) {
  check_axis(field.grid(), axis);
  return scheme.derivative(field, axis);
}

TridiagonalLU CompactFilter::lhs(std::size_t n, double af) {
  std::vector<double> sub(n, af), diag(n, 1.0), super(n, af);
  sub[0] = 0.0;
  super[0] = 0.0;
  sub[n - 1] = 0.0;
  super[n - 1] = 0.0;
  return TridiagonalLU(std::move(sub), std::move(diag), std::move(super));
}

CompactFilter::CompactFilter(const Grid& grid, double alpha_f) : grid_(grid), alpha_(alpha_f) {
  if (!(alpha_f >= 0.0 && alpha_f < 0.5)) {
    throw ConfigError("filter: alpha_f must lie in [0, 0.5)");
  }
  for (int a = 0; a < grid.dim(); ++a) lu_[a] = lhs(static_cast<std::size_t>(grid.count(a)), alpha_f);
}

void CompactFilter::apply_in_place(double* f, int axis) const {
  check_axis(grid_, axis);
  const AxisLines lines(grid_, axis);
  const std::size_t n = lines.length;
  const std::size_t s = lines.stride;
  const double w = 1.0 - 2.0 * alpha_;
  // Second-difference weights of the 2nd-, 4th- and 6th-order rows.
  const double o2 = 0.25 * w;
  const double o4a = 0.25 * w, o4b = -w / 16.0;
  const double o6a = 15.0 / 64.0 * w, o6b = -3.0 / 32.0 * w, o6c = w / 64.0;
  const TridiagonalLU& lu = lu_[axis];

  for_each_line_block(grid_, axis, [&](std::size_t base, std::size_t r0, std::size_t r1) {
    thread_local std::vector<double> scratch;
    const std::size_t batch = r1 - r0;
    scratch.assign(n * batch, 0.0);
    const double* fb = f + base + r0;
    double* sc = scratch.data();
    auto d2 = [&](std::size_t m, std::size_t k, std::size_t r) {
      return fb[(m + k) * s + r] + fb[(m - k) * s + r] - 2.0 * fb[m * s + r];
    };
    for (std::size_t r = 0; r < batch; ++r) {
      sc[1 * batch + r] = o2 * d2(1, 1, r);
      sc[2 * batch + r] = o4a * d2(2, 1, r) + o4b * d2(2, 2, r);
      sc[(n - 3) * batch + r] = o4a * d2(n - 3, 1, r) + o4b * d2(n - 3, 2, r);
      sc[(n - 2) * batch + r] = o2 * d2(n - 2, 1, r);
    }
    for (std::size_t m = 3; m + 3 < n; ++m) {
      double* row = sc + m * batch;
      for (std::size_t r = 0; r < batch; ++r) {
        row[r] = o6a * d2(m, 1, r) + o6b * d2(m, 2, r) + o6c * d2(m, 3, r);
      }
    }
    lu.solve_strided(sc, batch, batch);
    double* out = f + base + r0;
    for (std::size_t m = 0; m < n; ++m) {
      const double* row = sc + m * batch;
      double* dst = out + m * s;
      for (std::size_t r = 0; r < batch; ++r) dst[r] += row[r];
    }
  });
}

ScalarField CompactFilter::apply(const ScalarField& f, int axis) const {
  if (!(f.grid() == grid_)) throw ShapeError("filter: field grid differs from filter grid");
  ScalarField out = f;
  apply_in_place(out.data(), axis);
  return out;
}

ScalarField compact_filter_apply(const ScalarField& field, int axis, const CompactFilter& filter) {
  check_axis(field.grid(), axis);
  return filter.apply(field, axis);
}

}  // namespace adjsound

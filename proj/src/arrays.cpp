#include "adjsound/arrays.hpp"

#include <cmath>
#include <numbers>

#include "adjsound/errors.hpp"

namespace adjsound {

std::vector<Vec3> array_positions(const ArraySpec& spec, int dim) {
  if (spec.kind == ArrayKind::Explicit) return spec.positions;
  if (spec.count < 1) throw ConfigError("array count must be >= 1");
  if (spec.kind == ArrayKind::Line) {
    std::vector<Vec3> out;
    for (int m = 0; m < spec.count; ++m) {
      const double f = spec.count == 1 ? 0.5 : static_cast<double>(m) / (spec.count - 1);
      Vec3 x{};
      for (int a = 0; a < 3; ++a) x[a] = spec.start_m[a] + f * (spec.end_m[a] - spec.start_m[a]);
      out.push_back(x);
    }
    return out;
  }
  if (!(spec.r_min_m > 0.0) || !(spec.r_max_m >= spec.r_min_m)) {
    throw ConfigError("array radii must satisfy 0 < r_min <= r_max");
  }
  if (!(spec.scale > 0.0)) throw ConfigError("array scale must be positive");
  if (spec.normal_axis < 0 || spec.normal_axis >= dim) {
    throw ConfigError("array normal_axis must be < " + std::to_string(dim));
  }
  // Tangential axes of the array plane (3D) or the array line (2D).
  int t0 = (spec.normal_axis + 1) % 3;
  int t1 = (spec.normal_axis + 2) % 3;
  if (dim == 2) t0 = spec.normal_axis == 0 ? 1 : 0;
  if (dim == 3 && t0 > t1) std::swap(t0, t1);

  std::vector<Vec3> out;
  if (spec.count == 1) {
    Vec3 x = spec.center_m;
    x[spec.normal_axis] = spec.offset_m;
    out.push_back(x);
    return out;
  }
  const double theta_max = 2.0 * std::numbers::pi * spec.turns;
  const double growth = std::log(spec.r_max_m / spec.r_min_m);
  for (int m = 0; m < spec.count; ++m) {
    const double frac = static_cast<double>(m) / (spec.count - 1);
    const double theta = frac * theta_max;
    const double r = spec.scale * spec.r_min_m * std::exp(growth * frac);
    Vec3 x = spec.center_m;
    x[spec.normal_axis] = spec.offset_m;
    x[t0] += r * std::cos(theta);
    if (dim == 3) x[t1] += r * std::sin(theta);
    out.push_back(x);
  }
  return out;
}

MicrophoneArray build_array(const ArraySpec& spec, const Grid& grid) {
  return MicrophoneArray::create(grid, array_positions(spec, grid.dim()), spec.names);
}

}  // namespace adjsound

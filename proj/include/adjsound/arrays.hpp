#pragma once

#include <string>
#include <vector>

#include "adjsound/grid.hpp"
#include "adjsound/microphones.hpp"

namespace adjsound {

enum class ArrayKind { Spiral, Line, Explicit };

/**
 * Microphone array geometry.
 *
 * Spiral: equiangular spiral r(theta) = r_min (r_max / r_min)^(theta / theta_max)
 * with theta_max = 2 pi turns, `count` mics at equal theta increments, radii
 * multiplied by `scale`. In 3D the spiral lies in the plane normal to
 * `normal_axis` at `offset_m`, centred on `center_m`. In 2D it is projected
 * onto the line normal to `normal_axis`: the tangential coordinate is
 * center + r cos(theta).
 *
 * Line: `count` mics evenly spaced from start_m to end_m.
 */
struct ArraySpec {
  ArrayKind kind = ArrayKind::Spiral;
  int count = 64;
  double r_min_m = 0.03;
  double r_max_m = 0.5;
  double turns = 3.0;
  double scale = 1.0;
  int normal_axis = 2;
  double offset_m = 0.0;
  Vec3 center_m{0.0, 0.0, 0.0};
  Vec3 start_m{0.0, 0.0, 0.0};
  Vec3 end_m{0.0, 0.0, 0.0};
  std::vector<Vec3> positions;
  std::vector<std::string> names;

  bool operator==(const ArraySpec&) const = default;
};

/// Positions only (no grid check). A spiral of count 1 places the single mic at the centre.
std::vector<Vec3> array_positions(const ArraySpec& spec, int dim);

/// Builds and validates the array; out-of-domain mics raise ConfigError listing their indices.
MicrophoneArray build_array(const ArraySpec& spec, const Grid& grid);

}  // namespace adjsound

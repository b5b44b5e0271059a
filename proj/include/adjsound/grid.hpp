#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace adjsound {

using Vec3 = std::array<double, 3>;
using Index3 = std::array<int, 3>;

/// Minimum nodes per axis; the compact boundary closures need this much room.
inline constexpr int kMinAxisNodes = 8;

/**
 * Uniform structured Cartesian grid with 2 or 3 axes.
 *
 * Node (i, j, k) sits at origin + (i, j, k) * spacing. Storage is axis-major
 * with x1 fastest: linear index = i + n1 * (j + n2 * k). In 2D the third
 * extent is 1 and its spacing is reported as 1 so that cell measures stay
 * well defined.
 */
class Grid {
 public:
  Grid() = default;
  Grid(int dim, Index3 counts, Vec3 spacing, Vec3 origin);

  int dim() const { return dim_; }
  int count(int axis) const { return counts_[axis]; }
  const Index3& counts() const { return counts_; }
  double spacing(int axis) const { return spacing_[axis]; }
  const Vec3& spacings() const { return spacing_; }
  double origin(int axis) const { return origin_[axis]; }
  const Vec3& origins() const { return origin_; }

  std::size_t size() const {
    return static_cast<std::size_t>(counts_[0]) * counts_[1] * counts_[2];
  }

  /// Product of the active spacings (area in 2D, volume in 3D).
  double cell_measure() const;
  /// Smallest active spacing.
  double min_spacing() const;

  std::size_t index(int i, int j, int k = 0) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(counts_[0]) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(counts_[1]) * k);
  }
  Index3 unravel(std::size_t idx) const;

  double coordinate(int axis, int i) const { return origin_[axis] + i * spacing_[axis]; }
  Vec3 position(std::size_t idx) const;
  Vec3 position(const Index3& ijk) const;

  /// Upper coordinate of the domain along an axis.
  double upper(int axis) const { return origin_[axis] + (counts_[axis] - 1) * spacing_[axis]; }
  bool contains(const Vec3& x, double tol = 1e-12) const;
  /// Nearest grid node to x (clamped into the grid).
  Index3 nearest_node(const Vec3& x) const;

  /// Stride between consecutive nodes along `axis` in linear storage.
  std::size_t stride(int axis) const;

  bool operator==(const Grid& other) const = default;

 private:
  int dim_ = 2;
  Index3 counts_{1, 1, 1};
  Vec3 spacing_{1.0, 1.0, 1.0};
  Vec3 origin_{0.0, 0.0, 0.0};
};

/// spacing = extent / (count - 1) per axis, origin 0. Throws ConfigError
/// naming the first axis with fewer than kMinAxisNodes nodes.
Grid build_grid(const std::vector<double>& extents_m, const std::vector<int>& counts);
Grid build_grid(const std::vector<double>& extents_m, const std::vector<int>& counts,
                const std::vector<double>& origin_m);

/// Ideal gas reference state of the quiescent medium.
struct GasModel {
  double gamma = 1.4;
  double rho_ref = 1.2;     // kg/m^3
  double p_ref = 0.0;       // Pa

  double sound_speed() const;

  /// gamma, rho_ref given; p_ref chosen so that sqrt(gamma p_ref / rho_ref) = c.
  static GasModel from_sound_speed(double c_m_s, double gamma = 1.4, double rho_ref = 1.2);
  /// Default dry air at 343 m/s.
  static GasModel air() { return from_sound_speed(343.0); }

  void validate() const;
  bool operator==(const GasModel&) const = default;
};

}  // namespace adjsound

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "adjsound/adjoint.hpp"
#include "adjsound/field.hpp"
#include "adjsound/grid.hpp"
#include "adjsound/sources.hpp"

namespace adjsound {

/// Time-accumulated |p*| over levels [begin, end].
struct SensitivityMap {
  ScalarField values;
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Inclusive level window; `end` past the last level is clamped.
struct LevelWindow {
  std::size_t begin = 0;
  std::size_t end = static_cast<std::size_t>(-1);
};

/// Nodes whose coordinate along `axis` is the one nearest `coordinate_m`
/// (a plane in 3D, a line in 2D).
struct Restriction {
  int axis = 0;
  double coordinate_m = 0.0;

  bool contains(const Grid& grid, std::size_t node) const;
  bool operator==(const Restriction&) const = default;
};

struct Peak {
  Vec3 position{};
  double value = 0.0;
  std::size_t node = 0;
};

struct PeakSet {
  std::vector<Peak> peaks;
  double exclusion_radius_m = 0.0;
};

struct TrackPoint {
  double time_s = 0.0;
  Vec3 position{};
  double peak = 0.0;
  double confidence = 0.0;
};

struct Track {
  std::vector<TrackPoint> points;
  std::size_t window_steps = 0;
};

/// p-bar(x) = sum over the window of |p*(x, t_n)|. Throws ConfigError for an empty window.
SensitivityMap accumulate_abs_sensitivity(const AdjointTrajectory& adjoint,
                                          const LevelWindow& window = {});

/**
 * Greedy maxima: candidates are nodes that are maximal within the exclusion
 * radius, taken in descending value (ties by node index) while keeping every
 * pair at least the radius apart. Throws NumericalError when the map is zero.
 */
PeakSet detect_peaks(const SensitivityMap& map, std::size_t count, double exclusion_radius_m,
                     const std::optional<Restriction>& restriction = std::nullopt);

/**
 * Per level: argmax over the restricted nodes of a centred moving sum of |p*|
 * over window_steps levels (odd; even values are rounded up), refined to
 * sub-cell precision by a parabola per free axis. Confidence is the peak over
 * the median of the restricted values. A zero window keeps the
 * previous position with confidence 0.
 */
Track track_moving(const AdjointTrajectory& adjoint, const std::optional<Restriction>& restriction,
                   std::size_t window_steps);

/// p* per level at the grid node nearest to path.position(t).
std::vector<double> adjoint_along_path(const AdjointTrajectory& adjoint, const SourcePath& path);

/// Candidate static sources at the peaks (zero signals of `levels` samples).
SourceSet peaks_to_sources(const PeakSet& peaks, double half_width, std::size_t levels);

}  // namespace adjsound

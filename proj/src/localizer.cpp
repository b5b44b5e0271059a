#include "adjsound/localizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "adjsound/errors.hpp"
#include "adjsound/parallel.hpp"

namespace adjsound {

bool Restriction::contains(const Grid& grid, std::size_t node) const {
  const Index3 ijk = grid.unravel(node);
  Vec3 x{};
  x[axis] = coordinate_m;
  return grid.nearest_node(x)[axis] == ijk[axis];
}

SensitivityMap accumulate_abs_sensitivity(const AdjointTrajectory& adjoint,
                                          const LevelWindow& window) {
  if (adjoint.size() == 0) throw ConfigError("adjoint trajectory holds no pressure levels");
  const std::size_t end = std::min(window.end, adjoint.size() - 1);
  if (window.begin > end) throw ConfigError("empty accumulation window");
  SensitivityMap map;
  map.begin = window.begin;
  map.end = end;
  map.values = ScalarField(adjoint.p_star.front().grid());
  double* out = map.values.data();
  // Per node, levels are summed in order so the result is independent of the worker count.
  parallel_for(map.values.size(), [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t n = window.begin; n <= end; ++n) s += std::abs(adjoint.p_star[n][i]);
    out[i] = s;
  });
  return map;
}

namespace {

double distance(const Vec3& a, const Vec3& b) {
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) +
                   (a[2] - b[2]) * (a[2] - b[2]));
}

std::vector<std::size_t> restricted_nodes(const Grid& grid,
                                          const std::optional<Restriction>& restriction) {
  std::vector<std::size_t> nodes;
  nodes.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!restriction || restriction->contains(grid, i)) nodes.push_back(i);
  }
  if (nodes.empty()) throw ConfigError("restriction selects no grid nodes");
  return nodes;
}

// Per-axis parabola through the peak and its two neighbours; a neighbour
// outside the grid or the restriction (value < 0) leaves that axis on the node.
Vec3 refine_peak(const Grid& grid, const std::vector<double>& values, std::size_t idx) {
  Vec3 x = grid.position(idx);
  const Index3 ijk = grid.unravel(idx);
  for (int a = 0; a < grid.dim(); ++a) {
    if (ijk[a] == 0 || ijk[a] + 1 >= grid.count(a)) continue;
    const double lo = values[idx - grid.stride(a)];
    const double hi = values[idx + grid.stride(a)];
    const double c = values[idx];
    if (lo < 0.0 || hi < 0.0) continue;
    const double curv = lo - 2.0 * c + hi;
    if (curv >= 0.0) continue;
    x[a] += std::clamp(0.5 * (lo - hi) / curv, -0.5, 0.5) * grid.spacing(a);
  }
  return x;
}

}  // namespace

PeakSet detect_peaks(const SensitivityMap& map, std::size_t count, double exclusion_radius_m,
                     const std::optional<Restriction>& restriction) {
  if (count < 1) throw ConfigError("peak count must be >= 1");
  if (!(exclusion_radius_m > 0.0)) throw ConfigError("exclusion radius must be positive");
  const Grid& grid = map.values.grid();
  if (map.values.max_abs() == 0.0) throw NumericalError("sensitivity map is zero: no signal");
  const std::vector<std::size_t> nodes = restricted_nodes(grid, restriction);

  // Cell offsets covering the exclusion radius.
  Index3 reach{0, 0, 0};
  for (int a = 0; a < grid.dim(); ++a) {
    reach[a] = static_cast<int>(std::ceil(exclusion_radius_m / grid.spacing(a)));
  }
  auto local_max = [&](std::size_t node) {
    const double v = map.values[node];
    const Index3 c = grid.unravel(node);
    const Vec3 xc = grid.position(node);
    for (int k = std::max(0, c[2] - reach[2]); k <= std::min(grid.count(2) - 1, c[2] + reach[2]); ++k) {
      for (int j = std::max(0, c[1] - reach[1]); j <= std::min(grid.count(1) - 1, c[1] + reach[1]); ++j) {
        for (int i = std::max(0, c[0] - reach[0]); i <= std::min(grid.count(0) - 1, c[0] + reach[0]); ++i) {
          const std::size_t other = grid.index(i, j, k);
          if (other == node) continue;
          if (restriction && !restriction->contains(grid, other)) continue;
          if (distance(grid.position(other), xc) >= exclusion_radius_m) continue;
          const double w = map.values[other];
          if (w > v || (w == v && other < node)) return false;
        }
      }
    }
    return v > 0.0;
  };

  std::vector<std::size_t> candidates;
  for (std::size_t node : nodes) {
    if (local_max(node)) candidates.push_back(node);
  }
  std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
    const double va = map.values[a];
    const double vb = map.values[b];
    return va != vb ? va > vb : a < b;
  });

  PeakSet set;
  set.exclusion_radius_m = exclusion_radius_m;
  for (std::size_t node : candidates) {
    if (set.peaks.size() == count) break;
    const Vec3 x = grid.position(node);
    const bool clear = std::all_of(set.peaks.begin(), set.peaks.end(), [&](const Peak& p) {
      return distance(p.position, x) >= exclusion_radius_m;
    });
    if (clear) set.peaks.push_back({x, map.values[node], node});
  }
  return set;
}

Track track_moving(const AdjointTrajectory& adjoint, const std::optional<Restriction>& restriction,
                   std::size_t window_steps) {
  if (adjoint.size() == 0) throw ConfigError("adjoint trajectory holds no pressure levels");
  const Grid& grid = adjoint.p_star.front().grid();
  const std::vector<std::size_t> nodes = restricted_nodes(grid, restriction);
  const std::size_t levels = adjoint.size();
  const std::size_t half = window_steps / 2;

  Track track;
  track.window_steps = 2 * half + 1;
  std::vector<double> sums(nodes.size(), 0.0);
  std::vector<double> scratch(nodes.size());
  std::vector<double> on_grid(grid.size(), -1.0);
  Vec3 last = grid.position(nodes[nodes.size() / 2]);

  for (std::size_t n = 0; n < levels; ++n) {
    // Window sums are recomputed per level (not updated incrementally) so
    // every level is exact and independent of the history.
    const std::size_t lo = n >= half ? n - half : 0;
    const std::size_t hi = std::min(levels - 1, n + half);
    parallel_for(nodes.size(), [&](std::size_t m) {
      double s = 0.0;
      for (std::size_t l = lo; l <= hi; ++l) s += std::abs(adjoint.p_star[l][nodes[m]]);
      sums[m] = s;
    });
    std::size_t best = 0;
    for (std::size_t m = 1; m < nodes.size(); ++m) {
      if (sums[m] > sums[best]) best = m;
    }
    TrackPoint pt;
    pt.time_s = static_cast<double>(n) * adjoint.dt;
    if (sums[best] > 0.0) {
      scratch = sums;
      auto mid = scratch.begin() + static_cast<std::ptrdiff_t>(scratch.size() / 2);
      std::nth_element(scratch.begin(), mid, scratch.end());
      const double median = *mid;
      for (std::size_t m = 0; m < nodes.size(); ++m) on_grid[nodes[m]] = sums[m];
      last = refine_peak(grid, on_grid, nodes[best]);
      pt.peak = sums[best];
      pt.confidence = median > 0.0 ? sums[best] / median : std::numeric_limits<double>::infinity();
    }
    pt.position = last;
    track.points.push_back(pt);
  }
  return track;
}

std::vector<double> adjoint_along_path(const AdjointTrajectory& adjoint, const SourcePath& path) {
  std::vector<double> out(adjoint.size(), 0.0);
  for (std::size_t n = 0; n < adjoint.size(); ++n) {
    const Grid& grid = adjoint.p_star[n].grid();
    const Vec3 x = path.position(static_cast<double>(n) * adjoint.dt);
    const Index3 ijk = grid.nearest_node(x);
    out[n] = adjoint.p_star[n][grid.index(ijk[0], ijk[1], ijk[2])];
  }
  return out;
}

SourceSet peaks_to_sources(const PeakSet& peaks, double half_width, std::size_t levels) {
  SourceSet out;
  for (std::size_t i = 0; i < peaks.peaks.size(); ++i) {
    MonopoleSource s;
    s.name = "candidate_" + std::to_string(i);
    s.center = peaks.peaks[i].position;
    s.half_width = half_width;
    s.signal.assign(levels, 0.0);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace adjsound

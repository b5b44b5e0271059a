#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "adjsound/blob.hpp"
#include "adjsound/grid.hpp"

namespace adjsound {

/// Accelerating-decelerating straight path: x(t) = start + (end - start)(1 - cos(pi tau)) / 2.
struct SourcePath {
  Vec3 start{0.0, 0.0, 0.0};
  Vec3 end{0.0, 0.0, 0.0};
  double t_start = 0.0;
  double t_end = 0.0;

  Vec3 position(double t) const;
  bool operator==(const SourcePath&) const = default;
};

/**
 * Pressure-equation monopole: fixed Gaussian support times a free signal.
 *
 * signal[n] is the forcing s_p at time level n; between levels the signal is
 * linear in time. A source with a path moves its support along it (the
 * support is then recomputed at every stage and not snapped to nodes).
 */
struct MonopoleSource {
  std::string name;
  Vec3 center{0.0, 0.0, 0.0};
  double half_width = 0.0;
  std::vector<double> signal;
  std::optional<SourcePath> path;

  /// Signal at fractional time level (e.g. n + 0.5); zero outside the samples.
  double signal_at(double level) const;
  bool moving() const { return path.has_value(); }
};

using SourceSet = std::vector<MonopoleSource>;

/// Precomputed supports of a source set on one grid.
class SourceForcing {
 public:
  SourceForcing() = default;
  SourceForcing(const Grid& grid, const SourceSet& sources);

  /// target[x] += scale * sum_k blob_k(x) s_k(level)
  void add(double level, double dt, double* target, double scale) const;

  /// Support of source k at time t (static sources ignore t).
  BlobStencil stencil(std::size_t k, double t) const;

  const SourceSet& sources() const { return sources_; }

 private:
  Grid grid_;
  SourceSet sources_;
  std::vector<BlobStencil> static_stencils_;
};

}  // namespace adjsound

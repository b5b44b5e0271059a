#include "adjsound/sources.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace adjsound {

Vec3 SourcePath::position(double t) const {
  const double span = t_end - t_start;
  const double tau = span > 0.0 ? std::clamp((t - t_start) / span, 0.0, 1.0) : 1.0;
  const double w = 0.5 * (1.0 - std::cos(std::numbers::pi * tau));
  Vec3 x{};
  for (int a = 0; a < 3; ++a) x[a] = start[a] + (end[a] - start[a]) * w;
  return x;
}

double MonopoleSource::signal_at(double level) const {
  if (signal.empty() || level < 0.0) return 0.0;
  const double fl = std::floor(level);
  const auto n = static_cast<std::size_t>(fl);
  if (n >= signal.size()) return 0.0;
  const double frac = level - fl;
  if (frac == 0.0) return signal[n];
  const double next = n + 1 < signal.size() ? signal[n + 1] : 0.0;
  return signal[n] + frac * (next - signal[n]);
}

SourceForcing::SourceForcing(const Grid& grid, const SourceSet& sources)
    : grid_(grid), sources_(sources) {
  static_stencils_.resize(sources_.size());
  for (std::size_t k = 0; k < sources_.size(); ++k) {
    if (!sources_[k].moving()) {
      static_stencils_[k] = blob_stencil(grid_, sources_[k].center, sources_[k].half_width);
    }
  }
}

BlobStencil SourceForcing::stencil(std::size_t k, double t) const {
  const MonopoleSource& s = sources_[k];
  if (!s.moving()) return static_stencils_[k];
  return blob_stencil_exact(grid_, s.path->position(t), s.half_width);
}

void SourceForcing::add(double level, double dt, double* target, double scale) const {
  for (std::size_t k = 0; k < sources_.size(); ++k) {
    const double amp = sources_[k].signal_at(level);
    if (amp == 0.0) continue;
    const double a = scale * amp;
    if (sources_[k].moving()) {
      const BlobStencil b = stencil(k, level * dt);
      for (std::size_t n = 0; n < b.nodes.size(); ++n) target[b.nodes[n]] += a * b.weights[n];
    } else {
      const BlobStencil& b = static_stencils_[k];
      for (std::size_t n = 0; n < b.nodes.size(); ++n) target[b.nodes[n]] += a * b.weights[n];
    }
  }
}

}  // namespace adjsound

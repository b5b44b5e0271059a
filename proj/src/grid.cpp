#include "adjsound/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adjsound/errors.hpp"

namespace adjsound {

Grid::Grid(int dim, Index3 counts, Vec3 spacing, Vec3 origin)
    : dim_(dim), counts_(counts), spacing_(spacing), origin_(origin) {
  if (dim != 2 && dim != 3) throw ConfigError("grid: dim must be 2 or 3");
  for (int a = 0; a < dim; ++a) {
    if (counts[a] < kMinAxisNodes) {
      throw ConfigError("grid: axis " + std::to_string(a) + " has " + std::to_string(counts[a]) +
                        " nodes, need at least " + std::to_string(kMinAxisNodes));
    }
    if (!(spacing[a] > 0.0) || !std::isfinite(spacing[a])) {
      throw ConfigError("grid: axis " + std::to_string(a) + " spacing must be positive");
    }
  }
  if (dim == 2) {
    counts_[2] = 1;
    spacing_[2] = 1.0;
    origin_[2] = 0.0;
  }
}

double Grid::cell_measure() const {
  double m = 1.0;
  for (int a = 0; a < dim_; ++a) m *= spacing_[a];
  return m;
}

double Grid::min_spacing() const {
  double h = spacing_[0];
  for (int a = 1; a < dim_; ++a) h = std::min(h, spacing_[a]);
  return h;
}

Index3 Grid::unravel(std::size_t idx) const {
  Index3 ijk{};
  ijk[0] = static_cast<int>(idx % counts_[0]);
  idx /= counts_[0];
  ijk[1] = static_cast<int>(idx % counts_[1]);
  ijk[2] = static_cast<int>(idx / counts_[1]);
  return ijk;
}

Vec3 Grid::position(std::size_t idx) const { return position(unravel(idx)); }

Vec3 Grid::position(const Index3& ijk) const {
  Vec3 x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) x[a] = coordinate(a, ijk[a]);
  return x;
}

bool Grid::contains(const Vec3& x, double tol) const {
  for (int a = 0; a < dim_; ++a) {
    const double slack = tol * std::max(1.0, std::abs(upper(a)));
    if (x[a] < origin_[a] - slack || x[a] > upper(a) + slack) return false;
  }
  return true;
}

Index3 Grid::nearest_node(const Vec3& x) const {
  Index3 ijk{0, 0, 0};
  for (int a = 0; a < dim_; ++a) {
    const long i = std::lround((x[a] - origin_[a]) / spacing_[a]);
    ijk[a] = static_cast<int>(std::clamp<long>(i, 0, counts_[a] - 1));
  }
  return ijk;
}

std::size_t Grid::stride(int axis) const {
  std::size_t s = 1;
  for (int a = 0; a < axis; ++a) s *= static_cast<std::size_t>(counts_[a]);
  return s;
}

Grid build_grid(const std::vector<double>& extents_m, const std::vector<int>& counts) {
  return build_grid(extents_m, counts, std::vector<double>(extents_m.size(), 0.0));
}

Grid build_grid(const std::vector<double>& extents_m, const std::vector<int>& counts,
                const std::vector<double>& origin_m) {
  const std::size_t dim = counts.size();
  if ((dim != 2 && dim != 3) || extents_m.size() != dim || origin_m.size() != dim) {
    throw ConfigError("grid: need 2 or 3 axes with matching extents, counts and origin");
  }
  Index3 n{1, 1, 1};
  Vec3 h{1.0, 1.0, 1.0};
  Vec3 o{0.0, 0.0, 0.0};
  for (std::size_t a = 0; a < dim; ++a) {
    if (counts[a] < kMinAxisNodes) {
      throw ConfigError("grid: axis " + std::to_string(a) + " has " + std::to_string(counts[a]) +
                        " nodes, need at least " + std::to_string(kMinAxisNodes));
    }
    if (!(extents_m[a] > 0.0)) {
      throw ConfigError("grid: axis " + std::to_string(a) + " extent must be positive");
    }
    n[a] = counts[a];
    h[a] = extents_m[a] / (counts[a] - 1);
    o[a] = origin_m[a];
  }
  return Grid(static_cast<int>(dim), n, h, o);
}

double GasModel::sound_speed() const { return std::sqrt(gamma * p_ref / rho_ref); }

GasModel GasModel::from_sound_speed(double c_m_s, double gamma, double rho_ref) {
  GasModel g;
  g.gamma = gamma;
  g.rho_ref = rho_ref;
  g.p_ref = rho_ref * c_m_s * c_m_s / gamma;
  g.validate();
  return g;
}

void GasModel::validate() const {
  if (!(gamma > 1.0)) throw ConfigError("gas: gamma must exceed 1");
  if (!(rho_ref > 0.0)) throw ConfigError("gas: rho_ref must be positive");
  if (!(p_ref > 0.0)) throw ConfigError("gas: p_ref must be positive");
}

}  // namespace adjsound

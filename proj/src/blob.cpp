#include "adjsound/blob.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "adjsound/errors.hpp"

namespace adjsound {

double BlobStencil::mass() const {
  CompensatedSum s;
  for (double w : weights) s.add(w);
  return s.value();
}

double blob_profile(double r, double half_width) {
  const double x = r / half_width;
  if (x > kBlobTruncation) return 0.0;
  return std::exp(-std::numbers::ln2 * x * x);
}

namespace {

BlobStencil build(const Grid& grid, const Vec3& center, double half_width) {
  BlobStencil blob;
  const double radius = kBlobTruncation * half_width;
  Index3 lo{0, 0, 0};
  Index3 hi{0, 0, 0};
  for (int a = 0; a < grid.dim(); ++a) {
    lo[a] = std::max(0, static_cast<int>(std::floor((center[a] - radius - grid.origin(a)) / grid.spacing(a))));
    hi[a] = std::min(grid.count(a) - 1,
                     static_cast<int>(std::ceil((center[a] + radius - grid.origin(a)) / grid.spacing(a))));
  }
  for (int k = lo[2]; k <= hi[2]; ++k) {
    for (int j = lo[1]; j <= hi[1]; ++j) {
      for (int i = lo[0]; i <= hi[0]; ++i) {
        const Vec3 x = grid.position(Index3{i, j, k});
        double r2 = 0.0;
        for (int a = 0; a < grid.dim(); ++a) r2 += (x[a] - center[a]) * (x[a] - center[a]);
        const double w = blob_profile(std::sqrt(r2), half_width);
        if (w > 0.0) {
          blob.nodes.push_back(grid.index(i, j, k));
          blob.weights.push_back(w);
        }
      }
    }
  }
  return blob;
}

void check(const Grid& grid, const Vec3& center, double half_width) {
  if (!(half_width > 0.0)) throw ConfigError("blob: half_width must be positive");
  if (!grid.contains(center)) throw ConfigError("blob: center outside the domain");
}

}  // namespace

BlobStencil blob_stencil(const Grid& grid, const Vec3& center, double half_width) {
  check(grid, center, half_width);
  return build(grid, grid.position(grid.nearest_node(center)), half_width);
}

BlobStencil blob_stencil_exact(const Grid& grid, const Vec3& center, double half_width) {
  check(grid, center, half_width);
  return build(grid, center, half_width);
}

ScalarField gaussian_blob(const Grid& grid, const Vec3& center, double half_width) {
  return to_field(grid, blob_stencil(grid, center, half_width));
}

ScalarField to_field(const Grid& grid, const BlobStencil& blob) {
  ScalarField f(grid);
  for (std::size_t n = 0; n < blob.nodes.size(); ++n) f[blob.nodes[n]] += blob.weights[n];
  return f;
}

}  // namespace adjsound

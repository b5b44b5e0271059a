#pragma once

#include <cstddef>
#include <vector>

#include "adjsound/field.hpp"
#include "adjsound/grid.hpp"

namespace adjsound {

/// Truncation radius of Gaussian blobs in units of the half-width.
inline constexpr double kBlobTruncation = 4.0;

/// Sparse Gaussian support: node indices with weights in (0, 1].
struct BlobStencil {
  std::vector<std::size_t> nodes;
  std::vector<double> weights;

  /// Sum of weights (dimensionless node count); times cell_measure gives the integral.
  double mass() const;
  bool empty() const { return nodes.empty(); }
};

/// exp(-ln2 (r/half_width)^2), zero beyond kBlobTruncation * half_width.
double blob_profile(double r, double half_width);

/**
 * Gaussian blob centred on the grid node nearest `center`: value 1 there,
 * 0.5 at distance half_width. Throws ConfigError for a non-positive
 * half-width or a center outside the domain.
 */
BlobStencil blob_stencil(const Grid& grid, const Vec3& center, double half_width);

/// Same profile centred exactly at `center` (no snapping); used for moving sources.
BlobStencil blob_stencil_exact(const Grid& grid, const Vec3& center, double half_width);

ScalarField gaussian_blob(const Grid& grid, const Vec3& center, double half_width);

ScalarField to_field(const Grid& grid, const BlobStencil& blob);

}  // namespace adjsound

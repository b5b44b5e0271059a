#pragma once

#include <cstddef>

#include "adjsound/grid.hpp"

namespace adjsound {

/// Caps the worker count for all solver kernels; 0 restores the default.
void set_worker_count(int n);
int worker_count();
/// Hardware concurrency as seen by the runtime.
int max_worker_count();

/**
 * Lines of a grid along one axis. Line element m of the line block starting
 * at `base` with inner offset r sits at base + m * stride + r.
 */
struct AxisLines {
  std::size_t length = 0;
  std::size_t stride = 0;
  std::size_t outer = 0;

  AxisLines(const Grid& grid, int axis)
      : length(static_cast<std::size_t>(grid.count(axis))),
        stride(grid.stride(axis)),
        outer(grid.size() / (static_cast<std::size_t>(grid.count(axis)) * grid.stride(axis))) {}
};

namespace detail {
inline constexpr std::size_t kInnerBlock = 128;
}

/**
 * Calls kernel(base, r0, r1) for every block of interleaved lines along
 * `axis`. Blocks are independent and each line is processed by exactly one
 * call, so results do not depend on the worker count.
 */
template <class Kernel>
void for_each_line_block(const Grid& grid, int axis, Kernel&& kernel) {
  const AxisLines lines(grid, axis);
  const std::size_t block = detail::kInnerBlock;
  const std::size_t inner_blocks = (lines.stride + block - 1) / block;
  const long long items = static_cast<long long>(lines.outer * inner_blocks);
#pragma omp parallel for schedule(static)
  for (long long item = 0; item < items; ++item) {
    const std::size_t o = static_cast<std::size_t>(item) / inner_blocks;
    const std::size_t b = static_cast<std::size_t>(item) % inner_blocks;
    const std::size_t r0 = b * block;
    const std::size_t r1 = (r0 + block < lines.stride) ? r0 + block : lines.stride;
    kernel(o * lines.length * lines.stride, r0, r1);
  }
}

/// Pointwise loop over [0, n) split across workers.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
}

}  // namespace adjsound

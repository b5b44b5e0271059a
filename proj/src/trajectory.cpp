#include "adjsound/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adjsound/errors.hpp"

namespace adjsound {

Trajectory::Trajectory(double dt) : dt_(dt) {}

Trajectory::Trajectory(double dt, std::size_t stride, Stepper stepper)
    : dt_(dt), stride_(stride), stepper_(std::move(stepper)) {
  if (stride_ == 0) throw ConfigError("checkpoint stride must be >= 1");
  if (!stepper_) throw ConfigError("checkpointed trajectory needs a stepper");
}

const Grid& Trajectory::grid() const {
  if (stored_.empty()) throw ShapeError("trajectory is empty");
  return stored_.front().grid();
}

void Trajectory::append(const StateField& q) {
  if (!checkpointed() || count_ % stride_ == 0) stored_.push_back(q);
  ++count_;
}

const StateField& Trajectory::state(std::size_t n) const {
  if (n >= count_) {
    throw ShapeError("trajectory level " + std::to_string(n) + " out of range (size " +
                     std::to_string(count_) + ")");
  }
  if (!checkpointed()) return stored_[n];
  const std::size_t offset = n % stride_;
  if (offset == 0) return stored_[n / stride_];
  const std::size_t base = n - offset;
  if (segment_base_ != base) {
    const std::size_t last = std::min(base + stride_ - 1, count_ - 1);
    segment_.resize(last - base);
    StateField q = stored_[base / stride_];
    for (std::size_t k = base; k < last; ++k) {
      stepper_(q, k);
      segment_[k - base] = q;
    }
    segment_base_ = base;
  }
  return segment_[offset - 1];
}

StorageChoice resolve_storage(const SolverSettings& settings, const Grid& grid) {
  const std::size_t levels = settings.steps + 1;
  const double state_bytes =
      static_cast<double>(grid.size()) * static_cast<double>(grid.dim() + 2) * sizeof(double);
  bool checkpointed = settings.storage == StoragePolicy::Checkpointed;
  if (settings.storage == StoragePolicy::Auto) {
    checkpointed = state_bytes * static_cast<double>(levels) > settings.memory_budget_bytes;
  }
  StorageChoice choice;
  choice.checkpointed = checkpointed;
  if (checkpointed) {
    choice.stride = settings.checkpoint_stride > 0
                        ? settings.checkpoint_stride
                        : std::max<std::size_t>(
                              1, static_cast<std::size_t>(std::ceil(std::sqrt(double(levels)))));
  }
  return choice;
}

}  // namespace adjsound

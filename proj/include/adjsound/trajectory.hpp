#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "adjsound/euler.hpp"
#include "adjsound/field.hpp"

namespace adjsound {

/**
 * Forward states at time levels 0..steps with uniform dt.
 *
 * Full storage keeps every level. Checkpointed storage keeps every
 * stride-th level and recomputes the others one segment at a time with the
 * same stepper the forward run used, so retrieved states are bit-identical.
 * Retrieval is not thread-safe; a returned reference stays valid until the
 * next call to state().
 */
class Trajectory {
 public:
  /// Advances a state from level n to level n + 1.
  using Stepper = std::function<void(StateField&, std::size_t)>;

  Trajectory() = default;
  /// Full storage.
  explicit Trajectory(double dt);
  /// Checkpointed storage.
  Trajectory(double dt, std::size_t stride, Stepper stepper);

  void append(const StateField& q);

  std::size_t size() const { return count_; }
  std::size_t steps() const { return count_ == 0 ? 0 : count_ - 1; }
  double dt() const { return dt_; }
  bool checkpointed() const { return stride_ > 0; }
  std::size_t stride() const { return stride_; }
  std::size_t stored_levels() const { return stored_.size(); }
  const Grid& grid() const;

  const StateField& state(std::size_t n) const;

 private:
  double dt_ = 0.0;
  std::size_t stride_ = 0;
  Stepper stepper_;
  std::vector<StateField> stored_;
  std::size_t count_ = 0;
  mutable std::size_t segment_base_ = static_cast<std::size_t>(-1);
  mutable std::vector<StateField> segment_;
};

struct StorageChoice {
  bool checkpointed = false;
  std::size_t stride = 0;
};

/// Resolves StoragePolicy::Auto against the memory budget and picks a stride.
StorageChoice resolve_storage(const SolverSettings& settings, const Grid& grid);

}  // namespace adjsound

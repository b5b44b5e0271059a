#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>

#include "adjsound/euler.hpp"
#include "adjsound/microphones.hpp"
#include "adjsound/sources.hpp"
#include "adjsound/trajectory.hpp"

namespace adjsound {

struct ForwardOptions {
  const MicrophoneArray* microphones = nullptr;
  bool keep_trajectory = true;
  /// Initial state; the quiescent reference when empty.
  std::optional<StateField> initial;
  /// Called with (level, state) after every completed step and for level 0.
  std::function<void(std::size_t, const StateField&)> observer;
};

struct ForwardResult {
  Trajectory trajectory;
  Recording recording;
  StateField final_state;
};

/**
 * RK4 time loop over settings.steps steps with one filter pass per step.
 * Samples the microphones at every level (steps + 1 samples) and keeps the
 * trajectory per the storage policy. Throws NumericalError with the step
 * index on NaN or a non-admissible state.
 */
ForwardResult run_forward(const std::shared_ptr<const Discretization>& disc,
                          const SourceSet& sources, const ForwardOptions& options = {});

}  // namespace adjsound

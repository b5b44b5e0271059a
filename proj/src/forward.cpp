#include "adjsound/forward.hpp"

#include "adjsound/errors.hpp"

namespace adjsound {

ForwardResult run_forward(const std::shared_ptr<const Discretization>& disc,
                          const SourceSet& sources, const ForwardOptions& options) {
  const Discretization& d = *disc;
  const std::size_t steps = d.settings.steps;
  const SourceForcing forcing(d.grid, sources);

  ForwardResult result;
  if (options.keep_trajectory) {
    const StorageChoice storage = resolve_storage(d.settings, d.grid);
    if (storage.checkpointed) {
      auto replay = std::make_shared<ForwardStepper>(disc, forcing);
      result.trajectory = Trajectory(d.dt(), storage.stride,
                                     [replay](StateField& q, std::size_t n) { replay->step(q, n); });
    } else {
      result.trajectory = Trajectory(d.dt());
    }
  } else {
    result.trajectory = Trajectory(d.dt());
  }

  Recording& rec = result.recording;
  rec.sample_rate = d.settings.sample_rate_hz;
  if (options.microphones != nullptr) {
    rec.names = options.microphones->names;
    rec.channels.assign(options.microphones->size(), {});
    for (auto& ch : rec.channels) ch.reserve(steps + 1);
  }
  const double p_ref = d.gas().p_ref;
  auto record = [&](std::size_t n, const StateField& q) {
    if (options.microphones != nullptr) {
      const auto samples = sample_microphones(q.p(), *options.microphones, p_ref);
      for (std::size_t m = 0; m < samples.size(); ++m) rec.channels[m].push_back(samples[m]);
    }
    if (options.keep_trajectory) result.trajectory.append(q);
    if (options.observer) options.observer(n, q);
  };

  StateField q = options.initial ? *options.initial : d.reference;
  if (!(q.grid() == d.grid)) throw ShapeError("initial state grid differs from the solver grid");
  check_state(q, 0);
  record(0, q);

  ForwardStepper stepper(disc, forcing);
  for (std::size_t n = 0; n < steps; ++n) {
    stepper.step(q, n);
    check_state(q, n + 1);
    record(n + 1, q);
  }
  result.final_state = std::move(q);
  return result;
}

}  // namespace adjsound

#pragma once

#include <utility>
#include <vector>

namespace adjsound {

// Vector-space operations used by the integrator. FieldSet provides its own
// overloads in field.hpp.
inline void assign_axpy(double& out, double x, double a, double k) { out = x + a * k; }
inline void add_scaled(double& out, double a, double k) { out += a * k; }

inline void assign_axpy(std::vector<double>& out, const std::vector<double>& x, double a,
                        const std::vector<double>& k) {
  out.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * k[i];
}
inline void add_scaled(std::vector<double>& out, double a, const std::vector<double>& k) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * k[i];
}

/**
 * Classical four-stage Runge-Kutta with reusable stage buffers.
 *
 * `rhs(const State& y, double t, State& rate)` writes dy/dt into `rate`.
 * Stages are evaluated at t, t + dt/2, t + dt/2, t + dt.
 */
template <class State>
class Rk4Integrator {
 public:
  template <class Rhs>
  void advance(State& y, double t, double dt, Rhs&& rhs) {
    if (!initialized_) {
      rate_ = y;
      stage_ = y;
      acc_ = y;
      initialized_ = true;
    }
    rhs(static_cast<const State&>(y), t, rate_);
    assign_axpy(acc_, y, dt / 6.0, rate_);
    assign_axpy(stage_, y, 0.5 * dt, rate_);

    rhs(static_cast<const State&>(stage_), t + 0.5 * dt, rate_);
    add_scaled(acc_, dt / 3.0, rate_);
    assign_axpy(stage_, y, 0.5 * dt, rate_);

    rhs(static_cast<const State&>(stage_), t + 0.5 * dt, rate_);
    add_scaled(acc_, dt / 3.0, rate_);
    assign_axpy(stage_, y, dt, rate_);

    rhs(static_cast<const State&>(stage_), t + dt, rate_);
    add_scaled(acc_, dt / 6.0, rate_);
    std::swap(y, acc_);
  }

 private:
  bool initialized_ = false;
  State rate_{};
  State stage_{};
  State acc_{};
};

/// One RK4 step of dy/dt = rhs(y, t); returns y(t + dt).
template <class State, class Rhs>
State rk4_advance(const State& state, double t, double dt, Rhs&& rhs) {
  State y = state;
  Rk4Integrator<State> integrator;
  integrator.advance(y, t, dt, [&](const State& s, double tt, State& rate) { rate = rhs(s, tt); });
  return y;
}

}  // namespace adjsound

#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "adjsound/euler.hpp"
#include "adjsound/field.hpp"
#include "adjsound/objective.hpp"
#include "adjsound/sources.hpp"
#include "adjsound/tangent.hpp"
#include "adjsound/trajectory.hpp"

namespace adjsound {

/**
 * Adjoint Euler operator (continuous adjoint of the tangent-linear system):
 *
 *   d/dt q* = Atilde [ -(B^i)^T d/dx_i q* + e_p d/dx_i(u_i p*) - e_{u_i} p* d/dx_i p0 - g ] + sigma q*
 *
 * with Atilde = (A^T)^-1 and p* the energy-row component. Integrated
 * backward in time from q*(T) = 0; boundary nodes use the characteristic
 * treatment with the amplitudes that enter in reversed time removed.
 */
class AdjointOperator {
 public:
  explicit AdjointOperator(std::shared_ptr<const Discretization> disc);

  /// `g` is the pressure-row forcing (grid-sized) or nullptr.
  void rate(const AdjointStateField& qs, const StateField& base, const double* g,
            AdjointStateField& out, double scale = 1.0);

 private:
  std::shared_ptr<const Discretization> disc_;
  std::vector<std::vector<double>> dqs_;
  std::vector<std::vector<double>> y_;
  std::vector<double> work_;
  std::vector<double> dwork_;
  std::vector<double> dp0_;
};

/// Single-shot adjoint rate.
AdjointStateField adjoint_rhs(const AdjointStateField& qs, const StateField& base,
                              const ScalarField* g,
                              const std::shared_ptr<const Discretization>& disc);

/// Adds the pressure-row forcing g at an integer level (base state provided).
using AdjointForcingFn = std::function<void(std::size_t level, const StateField& base, double* g)>;

struct AdjointOptions {
  bool keep_pressure = true;
  bool keep_states = false;
  /// Called with (level, q*) for levels steps..0 in that order.
  std::function<void(std::size_t, const AdjointStateField&)> observer;
};

/// Adjoint solution at levels 0..steps.
struct AdjointTrajectory {
  double dt = 0.0;
  std::vector<ScalarField> p_star;
  std::vector<AdjointStateField> states;

  std::size_t size() const { return p_star.size(); }
};

AdjointTrajectory run_adjoint(const std::shared_ptr<const Discretization>& disc,
                              const BaseStateFn& base, const AdjointForcingFn& forcing,
                              const AdjointOptions& options = {});

/// Forcing from an objective evaluated on the stored forward trajectory.
AdjointTrajectory run_adjoint(const std::shared_ptr<const Discretization>& disc,
                              const Trajectory& trajectory, const ObjectiveSpec& objective,
                              const AdjointOptions& options = {});

/// grad(n) = sum_x p*(x, t_n) blob(x) dV for a static support.
std::vector<double> gradient_wrt_source_signal(const AdjointTrajectory& adjoint,
                                               const BlobStencil& support);
/// Support taken from the source (moving sources follow their path).
std::vector<double> gradient_wrt_source_signal(const AdjointTrajectory& adjoint,
                                               const MonopoleSource& source);

}  // namespace adjsound

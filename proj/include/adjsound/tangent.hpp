#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "adjsound/euler.hpp"
#include "adjsound/field.hpp"
#include "adjsound/sources.hpp"

namespace adjsound {

/// Base flow at an integer time level (e.g. a stored forward trajectory).
using BaseStateFn = std::function<const StateField&(std::size_t level)>;

/**
 * Tangent-linear Euler operator about a base state.
 *
 * The perturbation is carried in conservative form dQ = A(q0) dq so that
 *   d/dt dQ = ds - sum_i [ d/dx_i(B^i dq) + C^i d/dx_i dq + dC^i d/dx_i p0 ] - sigma dQ.
 * Boundary nodes use the linearized characteristic treatment with the base
 * state's wave speeds. Used for verification only.
 */
class TangentLinearOperator {
 public:
  TangentLinearOperator(std::shared_ptr<const Discretization> disc, SourceForcing perturbation);

  void rate(const PerturbationField& dQ, const StateField& base, double level,
            PerturbationField& out, double scale = 1.0);

 private:
  std::shared_ptr<const Discretization> disc_;
  SourceForcing forcing_;
  std::vector<std::vector<double>> dq_;
  std::vector<std::vector<double>> flux_;
  std::vector<std::vector<double>> dflux_;
  std::vector<std::vector<double>> acc_;
  std::vector<double> ddp_;
  std::vector<double> dp0_;
};

/// Single-shot tangent-linear rate.
PerturbationField tangent_linear_rhs(const PerturbationField& dQ, const StateField& base,
                                     const SourceSet& perturbation, double level,
                                     const std::shared_ptr<const Discretization>& disc);

/// Conservative perturbation from a primitive one: dQ = A(q0) dq.
PerturbationField to_conservative(const PerturbationField& dq, const StateField& base,
                                  const GasModel& gas);
/// Primitive perturbation from a conservative one: dq = A(q0)^-1 dQ.
PerturbationField to_primitive(const PerturbationField& dQ, const StateField& base,
                               const GasModel& gas);

/**
 * Integrates the tangent-linear system from dQ = 0 over settings.steps
 * steps with the same RK4 and filter as the forward solver. The observer
 * sees (level, dQ) for levels 0..steps.
 */
PerturbationField run_tangent_linear(
    const std::shared_ptr<const Discretization>& disc, const BaseStateFn& base,
    const SourceSet& perturbation,
    const std::function<void(std::size_t, const PerturbationField&)>& observer = {});

/// Which linearization terms a base state activates.
struct BaseFeatures {
  bool flow = false;
  bool pressure_gradient = false;
};
BaseFeatures base_features(const StateField& base);

}  // namespace adjsound

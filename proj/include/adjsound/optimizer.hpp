#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "adjsound/adjoint.hpp"
#include "adjsound/euler.hpp"
#include "adjsound/forward.hpp"
#include "adjsound/objective.hpp"
#include "adjsound/sources.hpp"

namespace adjsound {

/// Source supports are fixed; only the signals are optimized.
struct InverseProblem {
  std::shared_ptr<const Discretization> disc;
  SourceSet sources;
  ObjectiveSpec objective;
};

/// Per source, per time level: dJ/ds_k(t) (multiply by dt for the derivative w.r.t. one sample).
using SourceGradient = std::vector<std::vector<double>>;

struct Evaluation {
  double J = 0.0;
  ForwardResult forward;
};

/// Forward solve and objective (including the regularization term).
Evaluation evaluate(const InverseProblem& problem, const SourceSet& sources);

/// Adjoint solve about an evaluated forward run, projected on the source supports.
SourceGradient compute_gradient(const InverseProblem& problem, const SourceSet& sources,
                                const Evaluation& evaluation);

/// sqrt(sum_k sum_n grad^2 dt).
double gradient_norm(const SourceGradient& gradient, double dt);

/// signal_k <- signal_k - alpha grad_k.
SourceSet descent_step(const SourceSet& sources, const SourceGradient& gradient, double alpha);

struct StepSearchSettings {
  /// alpha_0 = initial_factor * J / |grad|^2.
  double initial_factor = 2.0;
  int max_halvings = 8;
  /// After a decrease, also try the minimizer of the quadratic through
  /// J(0), J'(0) and the accepted trial.
  bool quadratic_refinement = true;
};

struct StepSearchResult {
  bool accepted = false;
  double alpha = 0.0;
  double J = 0.0;
  int trials = 0;
};

/**
 * Backtracking on J(alpha) along the negative gradient: start at alpha_0,
 * halve until J decreases (simple decrease, at most max_halvings halvings).
 * A failed search (or a zero gradient) signals stagnation.
 */
StepSearchResult select_step_size(double J_old, double grad_norm_sq,
                                  const std::function<double(double)>& trial,
                                  const StepSearchSettings& settings = {});

struct OptimizationSettings {
  int max_loops = 20;
  double relative_tolerance = 1e-3;
  int consecutive_below = 2;
  StepSearchSettings step;
};

struct IterationRecord {
  int iter = 0;
  double J = 0.0;
  double alpha = 0.0;
  double grad_norm = 0.0;
  double wall_s = 0.0;
};

struct OptimizationRun {
  std::vector<IterationRecord> history;
  SourceSet sources;
  std::string stop_reason;
  double J0 = 0.0;
};

/// Called after every accepted iteration (and for iteration 0) with the current signals.
using IterationCallback = std::function<void(const IterationRecord&, const SourceSet&)>;

/**
 * Steepest descent loop: forward, J, adjoint, gradient, step. Stops after
 * max_loops accepted steps, when the relative J change stays below the
 * tolerance for consecutive_below loops, on stagnation, or at J = 0.
 * `first_iter` numbers the records when resuming from persisted signals.
 */
OptimizationRun optimize(const InverseProblem& problem, const OptimizationSettings& settings,
                         const IterationCallback& callback = {}, int first_iter = 0);

}  // namespace adjsound

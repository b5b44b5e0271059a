#include "adjsound/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "adjsound/errors.hpp"

namespace adjsound {

Evaluation evaluate(const InverseProblem& problem, const SourceSet& sources) {
  const Discretization& d = *problem.disc;
  const std::size_t levels = d.settings.steps + 1;
  const double p_ref = d.gas().p_ref;
  CompensatedSum J;
  ForwardOptions options;
  options.observer = [&](std::size_t n, const StateField& q) {
    J.add(objective_increment(q.p(), problem.objective, n, levels, p_ref, d.dt()));
  };
  Evaluation e;
  e.forward = run_forward(problem.disc, sources, options);
  e.J = J.value() + regularization_value(sources, problem.objective.regularization, d.dt());
  return e;
}

SourceGradient compute_gradient(const InverseProblem& problem, const SourceSet& sources,
                                const Evaluation& evaluation) {
  const Discretization& d = *problem.disc;
  const Grid& grid = d.grid;
  const std::size_t levels = d.settings.steps + 1;
  std::vector<BlobStencil> supports;
  for (const MonopoleSource& s : sources) {
    if (s.moving()) throw ConfigError("optimization supports static sources only");
    supports.push_back(blob_stencil(grid, s.center, s.half_width));
  }
  SourceGradient grad(sources.size(), std::vector<double>(levels, 0.0));
  AdjointOptions options;
  options.keep_pressure = false;
  options.observer = [&](std::size_t n, const AdjointStateField& qs) {
    for (std::size_t k = 0; k < supports.size(); ++k) {
      CompensatedSum sum;
      for (std::size_t i = 0; i < supports[k].nodes.size(); ++i) {
        sum.add(qs.p()[supports[k].nodes[i]] * supports[k].weights[i]);
      }
      grad[k][n] = sum.value() * grid.cell_measure();
    }
  };
  run_adjoint(problem.disc, evaluation.forward.trajectory, problem.objective, options);

  const double lambda = problem.objective.regularization;
  if (lambda != 0.0) {
    for (std::size_t k = 0; k < sources.size(); ++k) {
      for (std::size_t n = 0; n < levels && n < sources[k].signal.size(); ++n) {
        grad[k][n] += 2.0 * lambda * sources[k].signal[n];
      }
    }
  }
  return grad;
}

double gradient_norm(const SourceGradient& gradient, double dt) {
  CompensatedSum sum;
  for (const auto& g : gradient) {
    for (double v : g) sum.add(v * v);
  }
  return std::sqrt(sum.value() * dt);
}

SourceSet descent_step(const SourceSet& sources, const SourceGradient& gradient, double alpha) {
  if (gradient.size() != sources.size()) throw ShapeError("gradient count differs from source count");
  SourceSet out = sources;
  for (std::size_t k = 0; k < out.size(); ++k) {
    auto& s = out[k].signal;
    if (s.size() < gradient[k].size()) s.resize(gradient[k].size(), 0.0);
    for (std::size_t n = 0; n < gradient[k].size(); ++n) s[n] -= alpha * gradient[k][n];
  }
  return out;
}

StepSearchResult select_step_size(double J_old, double grad_norm_sq,
                                  const std::function<double(double)>& trial,
                                  const StepSearchSettings& settings) {
  StepSearchResult r;
  if (!(grad_norm_sq > 0.0) || !(J_old > 0.0)) return r;
  double alpha = settings.initial_factor * J_old / grad_norm_sq;
  for (int h = 0; h <= settings.max_halvings; ++h, alpha *= 0.5) {
    const double J = trial(alpha);
    ++r.trials;
    if (J < J_old) {
      r.accepted = true;
      r.alpha = alpha;
      r.J = J;
      break;
    }
  }
  if (!r.accepted || !settings.quadratic_refinement) return r;

  // J(a) ~ J_old - a |g|^2 + kappa a^2 / 2 through the accepted trial.
  const double kappa = 2.0 * (r.J - J_old + r.alpha * grad_norm_sq) / (r.alpha * r.alpha);
  if (kappa > 0.0) {
    const double aq = grad_norm_sq / kappa;
    if (std::abs(aq / r.alpha - 1.0) > 0.02) {
      const double J = trial(aq);
      ++r.trials;
      if (J < r.J) {
        r.alpha = aq;
        r.J = J;
      }
    }
  }
  return r;
}

OptimizationRun optimize(const InverseProblem& problem, const OptimizationSettings& settings,
                         const IterationCallback& callback, int first_iter) {
  using Clock = std::chrono::steady_clock;
  const double dt = problem.disc->dt();
  const std::size_t levels = problem.disc->settings.steps + 1;

  OptimizationRun run;
  run.sources = problem.sources;
  for (auto& s : run.sources) s.signal.resize(levels, 0.0);

  auto t0 = Clock::now();
  auto elapsed = [&]() {
    const double s = std::chrono::duration<double>(Clock::now() - t0).count();
    t0 = Clock::now();
    return s;
  };

  Evaluation current = evaluate(problem, run.sources);
  run.J0 = current.J;
  IterationRecord rec;
  rec.iter = first_iter;
  rec.J = current.J;
  rec.wall_s = elapsed();
  run.history.push_back(rec);
  if (callback) callback(rec, run.sources);
  if (current.J == 0.0) {
    run.stop_reason = "zero_objective";
    return run;
  }

  int below = 0;
  for (int loop = 1; loop <= settings.max_loops; ++loop) {
    SourceGradient grad;
    try {
      grad = compute_gradient(problem, run.sources, current);
    } catch (const NumericalError& e) {
      throw NumericalError("loop " + std::to_string(first_iter + loop) + ": " + e.what());
    }
    const double gnorm = gradient_norm(grad, dt);

    // Only the best trial is kept; trajectories are large.
    double best_alpha = 0.0;
    Evaluation best;
    bool have_best = false;
    auto trial = [&](double alpha) {
      Evaluation e;
      try {
        e = evaluate(problem, descent_step(run.sources, grad, alpha));
      } catch (const NumericalError&) {
        // An overly long trial step may blow up; treat it as no decrease.
        return std::numeric_limits<double>::infinity();
      }
      const double J = e.J;
      if (!have_best || J < best.J) {
        best = std::move(e);
        best_alpha = alpha;
        have_best = true;
      }
      return J;
    };
    StepSearchResult step;
    try {
      step = select_step_size(current.J, gnorm * gnorm, trial, settings.step);
    } catch (const NumericalError& e) {
      throw NumericalError("loop " + std::to_string(first_iter + loop) + ": " + e.what());
    }
    if (!step.accepted) {
      run.stop_reason = "stagnation";
      return run;
    }
    const double J_prev = current.J;
    run.sources = descent_step(run.sources, grad, step.alpha);
    if (best_alpha != step.alpha) throw NumericalError("step search lost its accepted trial");
    current = std::move(best);

    rec.iter = first_iter + loop;
    rec.J = current.J;
    rec.alpha = step.alpha;
    rec.grad_norm = gnorm;
    rec.wall_s = elapsed();
    run.history.push_back(rec);
    if (callback) callback(rec, run.sources);

    if (current.J == 0.0) {
      run.stop_reason = "zero_objective";
      return run;
    }
    below = (J_prev - current.J) / J_prev < settings.relative_tolerance ? below + 1 : 0;
    if (below >= settings.consecutive_below) {
      run.stop_reason = "converged";
      return run;
    }
  }
  run.stop_reason = "max_loops";
  return run;
}

}  // namespace adjsound

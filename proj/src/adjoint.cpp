#include "adjsound/adjoint.hpp"

#include <algorithm>

#include "adjsound/boundary.hpp"
#include "adjsound/errors.hpp"
#include "adjsound/parallel.hpp"
#include "adjsound/rk4.hpp"

namespace adjsound {

AdjointOperator::AdjointOperator(std::shared_ptr<const Discretization> disc)
    : disc_(std::move(disc)) {
  const std::size_t n = disc_->grid.size();
  const int nc = disc_->grid.dim() + 2;
  dqs_.assign(nc, std::vector<double>(n));
  y_.assign(nc, std::vector<double>(n));
  work_.assign(n, 0.0);
  dwork_.assign(n, 0.0);
  dp0_.assign(n, 0.0);
}

void AdjointOperator::rate(const AdjointStateField& qs, const StateField& base, const double* g,
                           AdjointStateField& out, double scale) {
  const Discretization& disc = *disc_;
  const Grid& grid = disc.grid;
  const int dim = grid.dim();
  const int nc = dim + 2;
  const int np = dim + 1;
  const std::size_t n = grid.size();
  const double gamma = disc.gas().gamma;
  const double gm1 = gamma - 1.0;
  const double g1 = gamma / gm1;
  const bool cbc = disc.settings.characteristic_bcs;
  const BaseFeatures features = base_features(base);

  if (!(out.grid() == grid)) out = AdjointStateField(grid);
  for (auto& y : y_) std::fill(y.begin(), y.end(), 0.0);

  const double* rho = base.rho().data();
  const double* p = base.p().data();
  const double* u[3] = {base.u(0).data(), dim > 1 ? base.u(1).data() : nullptr,
                        dim > 2 ? base.u(2).data() : nullptr};
  const double* ps = qs.p().data();

  for (int a = 0; a < dim; ++a) {
    const double* ua = u[a];
    for (int c = 0; c < nc; ++c) disc.scheme.derivative(qs.component(c).data(), dqs_[c].data(), a);
    if (features.flow) {
      parallel_for(n, [&](std::size_t i) { work_[i] = ua[i] * ps[i]; });
      disc.scheme.derivative(work_.data(), dwork_.data(), a);
    }
    if (features.pressure_gradient) disc.scheme.derivative(p, dp0_.data(), a);

    const std::size_t len = static_cast<std::size_t>(grid.count(a));
    const std::size_t stride = grid.stride(a);
    for_each_line_block(grid, a, [&](std::size_t b, std::size_t r0, std::size_t r1) {
      for (std::size_t m = 0; m < len; ++m) {
        const bool face = cbc && (m == 0 || m + 1 == len);
        for (std::size_t r = r0; r < r1; ++r) {
          const std::size_t i = b + m * stride + r;
          if (!face) {
            const double dr = dqs_[0][i];
            const double dps = dqs_[np][i];
            double mom = 0.0;
            for (int j = 0; j < dim; ++j) mom += u[j][i] * dqs_[1 + j][i];
            y_[0][i] -= ua[i] * (dr + mom);
            for (int k = 0; k < dim; ++k) y_[1 + k][i] -= rho[i] * ua[i] * dqs_[1 + k][i];
            y_[1 + a][i] -= rho[i] * (dr + mom) + g1 * p[i] * dps;
            y_[np][i] -= dqs_[1 + a][i] + g1 * ua[i] * dps;
          } else {
            const int side = m == 0 ? 0 : 1;
            const double* f[5];
            for (int c = 0; c < nc; ++c) f[c] = qs.component(c).data();
            double w[5]{}, dz[5]{}, dlam[5]{}, e[5]{};
            w[0] = rho[i];
            w[np] = p[i];
            for (int j = 0; j < dim; ++j) w[1 + j] = u[j][i];
            for (int c = 0; c < nc; ++c) dz[c] = disc.scheme.boundary_derivative(f[c], i, a, side);
            dlam[0] = dz[0];
            for (int j = 0; j < dim; ++j) {
              dlam[0] += w[1 + j] * dz[1 + j];
              dlam[1 + j] = rho[i] * dz[1 + j];
            }
            dlam[np] = dz[np] / gm1;
            adjoint_characteristic_rate(w, dlam, gamma, dim, a, side, e);
            for (int c = 0; c < nc; ++c) y_[c][i] -= e[c];
          }
          if (features.flow) y_[np][i] += dwork_[i];
          if (features.pressure_gradient) y_[1 + a][i] -= ps[i] * dp0_[i];
        }
      }
    });
  }

  const double* sponge = disc.sponge.data();
  parallel_for(n, [&](std::size_t i) {
    const double yp = y_[np][i] - (g != nullptr ? g[i] : 0.0);
    const double s = sponge[i];
    out.p()[i] = scale * (gm1 * yp + s * ps[i]);
    double xr = y_[0][i];
    for (int k = 0; k < dim; ++k) {
      const double xk = y_[1 + k][i] / rho[i];
      xr -= u[k][i] * xk;
      out.u(k)[i] = scale * (xk + s * qs.u(k)[i]);
    }
    out.rho()[i] = scale * (xr + s * qs.rho()[i]);
  });
}

AdjointStateField adjoint_rhs(const AdjointStateField& qs, const StateField& base,
                              const ScalarField* g,
                              const std::shared_ptr<const Discretization>& disc) {
  if (!(qs.grid() == base.grid())) throw ShapeError("adjoint_rhs: adjoint and base grids differ");
  AdjointOperator op(disc);
  AdjointStateField out(disc->grid);
  op.rate(qs, base, g != nullptr ? g->data() : nullptr, out);
  return out;
}

AdjointTrajectory run_adjoint(const std::shared_ptr<const Discretization>& disc,
                              const BaseStateFn& base, const AdjointForcingFn& forcing,
                              const AdjointOptions& options) {
  const Discretization& d = *disc;
  const std::size_t steps = d.settings.steps;
  const std::size_t size = d.grid.size();
  AdjointOperator op(disc);
  Rk4Integrator<AdjointStateField> rk;

  AdjointTrajectory result;
  result.dt = d.dt();
  if (options.keep_pressure) result.p_star.assign(steps + 1, ScalarField());
  if (options.keep_states) result.states.assign(steps + 1, AdjointStateField());

  AdjointStateField qs(d.grid);
  auto store = [&](std::size_t n) {
    if (options.keep_pressure) result.p_star[n] = qs.p();
    if (options.keep_states) result.states[n] = qs;
    if (options.observer) options.observer(n, qs);
  };
  store(steps);

  auto eval_g = [&](std::size_t n, const StateField& b, std::vector<double>& g) {
    std::fill(g.begin(), g.end(), 0.0);
    if (forcing) forcing(n, b, g.data());
  };
  StateField hi = base(steps);
  StateField lo = hi;
  StateField mid = hi;
  std::vector<double> g_hi(size), g_lo(size), g_mid(size);
  eval_g(steps, hi, g_hi);

  const double dt = d.dt();
  for (std::size_t k = steps; k-- > 0;) {
    lo = base(k);
    eval_g(k, lo, g_lo);
    mid.assign_axpy(lo, 1.0, hi);
    mid.scale(0.5);
    for (std::size_t i = 0; i < size; ++i) g_mid[i] = 0.5 * (g_lo[i] + g_hi[i]);

    rk.advance(qs, static_cast<double>(k + 1), -1.0,
               [&](const AdjointStateField& s, double level, AdjointStateField& r) {
                 const double off = level - static_cast<double>(k);
                 if (off == 0.0) {
                   op.rate(s, lo, g_lo.data(), r, dt);
                 } else if (off == 1.0) {
                   op.rate(s, hi, g_hi.data(), r, dt);
                 } else {
                   op.rate(s, mid, g_mid.data(), r, dt);
                 }
               });
    apply_filter(d, qs);
    const std::string bad = qs.first_nonfinite_component();
    if (!bad.empty()) {
      throw NumericalError("adjoint step " + std::to_string(k) +
                           ": non-finite values in component 'adj_" + bad + "'");
    }
    store(k);
    std::swap(hi, lo);
    std::swap(g_hi, g_lo);
  }
  return result;
}

AdjointTrajectory run_adjoint(const std::shared_ptr<const Discretization>& disc,
                              const Trajectory& trajectory, const ObjectiveSpec& objective,
                              const AdjointOptions& options) {
  if (trajectory.size() != disc->settings.steps + 1) {
    throw ShapeError("forward trajectory has " + std::to_string(trajectory.size()) +
                     " levels, expected " + std::to_string(disc->settings.steps + 1));
  }
  if (!(trajectory.grid() == disc->grid)) throw ShapeError("trajectory grid differs from solver grid");
  const double p_ref = disc->gas().p_ref;
  return run_adjoint(
      disc, [&](std::size_t n) -> const StateField& { return trajectory.state(n); },
      [&](std::size_t n, const StateField& b, double* g) {
        add_adjoint_forcing(b.p(), objective, n, p_ref, g);
      },
      options);
}

std::vector<double> gradient_wrt_source_signal(const AdjointTrajectory& adjoint,
                                               const BlobStencil& support) {
  std::vector<double> grad(adjoint.size(), 0.0);
  for (std::size_t n = 0; n < adjoint.size(); ++n) {
    const ScalarField& ps = adjoint.p_star[n];
    CompensatedSum sum;
    for (std::size_t i = 0; i < support.nodes.size(); ++i) {
      sum.add(ps[support.nodes[i]] * support.weights[i]);
    }
    grad[n] = sum.value() * ps.grid().cell_measure();
  }
  return grad;
}

std::vector<double> gradient_wrt_source_signal(const AdjointTrajectory& adjoint,
                                               const MonopoleSource& source) {
  if (adjoint.size() == 0) return {};
  const Grid& grid = adjoint.p_star.front().grid();
  if (!source.moving()) return gradient_wrt_source_signal(adjoint, blob_stencil(grid, source.center, source.half_width));
  std::vector<double> grad(adjoint.size(), 0.0);
  for (std::size_t n = 0; n < adjoint.size(); ++n) {
    const BlobStencil s =
        blob_stencil_exact(grid, source.path->position(static_cast<double>(n) * adjoint.dt),
                           source.half_width);
    CompensatedSum sum;
    for (std::size_t i = 0; i < s.nodes.size(); ++i) sum.add(adjoint.p_star[n][s.nodes[i]] * s.weights[i]);
    grad[n] = sum.value() * grid.cell_measure();
  }
  return grad;
}

}  // namespace adjsound

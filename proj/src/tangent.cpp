#include "adjsound/tangent.hpp"

#include <algorithm>

#include "adjsound/boundary.hpp"
#include "adjsound/errors.hpp"
#include "adjsound/parallel.hpp"
#include "adjsound/rk4.hpp"

namespace adjsound {

BaseFeatures base_features(const StateField& base) {
  BaseFeatures f;
  for (int a = 0; a < base.grid().dim(); ++a) {
    if (base.u(a).max_abs() != 0.0) f.flow = true;
  }
  const auto p = base.p().values();
  f.pressure_gradient = std::any_of(p.begin(), p.end(), [&](double v) { return v != p.front(); });
  return f;
}

PerturbationField to_conservative(const PerturbationField& dq, const StateField& base,
                                  const GasModel& gas) {
  PerturbationField dQ(dq.grid());
  const int dim = dq.grid().dim();
  for (std::size_t i = 0; i < dq.grid().size(); ++i) {
    const double dr = dq.rho()[i];
    dQ.rho()[i] = dr;
    for (int j = 0; j < dim; ++j) dQ.u(j)[i] = base.u(j)[i] * dr + base.rho()[i] * dq.u(j)[i];
    dQ.p()[i] = dq.p()[i] / (gas.gamma - 1.0);
  }
  return dQ;
}

PerturbationField to_primitive(const PerturbationField& dQ, const StateField& base,
                               const GasModel& gas) {
  PerturbationField dq(dQ.grid());
  const int dim = dQ.grid().dim();
  for (std::size_t i = 0; i < dQ.grid().size(); ++i) {
    const double dr = dQ.rho()[i];
    dq.rho()[i] = dr;
    for (int j = 0; j < dim; ++j) dq.u(j)[i] = (dQ.u(j)[i] - base.u(j)[i] * dr) / base.rho()[i];
    dq.p()[i] = (gas.gamma - 1.0) * dQ.p()[i];
  }
  return dq;
}

TangentLinearOperator::TangentLinearOperator(std::shared_ptr<const Discretization> disc,
                                             SourceForcing perturbation)
    : disc_(std::move(disc)), forcing_(std::move(perturbation)) {
  const std::size_t n = disc_->grid.size();
  const int nc = disc_->grid.dim() + 2;
  dq_.assign(nc, std::vector<double>(n));
  flux_.assign(nc, std::vector<double>(n));
  dflux_.assign(nc, std::vector<double>(n));
  acc_.assign(nc, std::vector<double>(n));
  ddp_.assign(n, 0.0);
  dp0_.assign(n, 0.0);
}

void TangentLinearOperator::rate(const PerturbationField& dQ, const StateField& base,
                                 double level, PerturbationField& out, double scale) {
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

  if (!(out.grid() == grid)) out = PerturbationField(grid);
  for (auto& a : acc_) std::fill(a.begin(), a.end(), 0.0);

  const double* rho = base.rho().data();
  const double* p = base.p().data();
  const double* u[3] = {base.u(0).data(), dim > 1 ? base.u(1).data() : nullptr,
                        dim > 2 ? base.u(2).data() : nullptr};

  parallel_for(n, [&](std::size_t i) {
    const double dr = dQ.rho()[i];
    dq_[0][i] = dr;
    for (int j = 0; j < dim; ++j) dq_[1 + j][i] = (dQ.u(j)[i] - u[j][i] * dr) / rho[i];
    dq_[np][i] = gm1 * dQ.p()[i];
  });
  const double* dr = dq_[0].data();
  const double* dpp = dq_[np].data();

  for (int a = 0; a < dim; ++a) {
    const double* ua = u[a];
    const double* dua = dq_[1 + a].data();
    parallel_for(n, [&](std::size_t i) {
      flux_[0][i] = ua[i] * dr[i] + rho[i] * dua[i];
      for (int j = 0; j < dim; ++j) {
        flux_[1 + j][i] = ua[i] * u[j][i] * dr[i] + rho[i] * u[j][i] * dua[i] +
                          rho[i] * ua[i] * dq_[1 + j][i] + (j == a ? dpp[i] : 0.0);
      }
      flux_[np][i] = g1 * (p[i] * dua[i] + ua[i] * dpp[i]);
    });
    for (int c = 0; c < nc; ++c) disc.scheme.derivative(flux_[c].data(), dflux_[c].data(), a);
    if (features.flow) disc.scheme.derivative(dpp, ddp_.data(), a);
    if (features.pressure_gradient) disc.scheme.derivative(p, dp0_.data(), a);

    const std::size_t len = static_cast<std::size_t>(grid.count(a));
    const std::size_t stride = grid.stride(a);
    for_each_line_block(grid, a, [&](std::size_t b, std::size_t r0, std::size_t r1) {
      for (std::size_t m = 0; m < len; ++m) {
        const bool face = cbc && (m == 0 || m + 1 == len);
        for (std::size_t r = r0; r < r1; ++r) {
          const std::size_t i = b + m * stride + r;
          if (!face) {
            for (int c = 0; c < nc; ++c) acc_[c][i] -= dflux_[c][i];
            if (features.flow) acc_[np][i] += ua[i] * ddp_[i];
          } else {
            const int side = m == 0 ? 0 : 1;
            double w[5]{}, dw[5]{}, contrib[5]{};
            w[0] = rho[i];
            w[np] = p[i];
            for (int j = 0; j < dim; ++j) w[1 + j] = u[j][i];
            for (int c = 0; c < nc; ++c) {
              dw[c] = disc.scheme.boundary_derivative(dq_[c].data(), i, a, side);
            }
            characteristic_rate(w, dw, gamma, dim, a, side, contrib);
            acc_[0][i] += contrib[0];
            for (int j = 0; j < dim; ++j) acc_[1 + j][i] += rho[i] * contrib[1 + j] + w[1 + j] * contrib[0];
            acc_[np][i] += contrib[np] / gm1;
          }
          if (features.pressure_gradient) acc_[np][i] += dua[i] * dp0_[i];
        }
      }
    });
  }

  forcing_.add(level, disc.dt(), acc_[np].data(), 1.0);

  const double* sponge = disc.sponge.data();
  for (int c = 0; c < nc; ++c) {
    const double* in = dQ.component(c).data();
    double* o = out.component(c).data();
    const double* ac = acc_[c].data();
    parallel_for(n, [&](std::size_t i) { o[i] = scale * (ac[i] - sponge[i] * in[i]); });
  }
}

PerturbationField tangent_linear_rhs(const PerturbationField& dQ, const StateField& base,
                                     const SourceSet& perturbation, double level,
                                     const std::shared_ptr<const Discretization>& disc) {
  TangentLinearOperator op(disc, SourceForcing(disc->grid, perturbation));
  PerturbationField out(disc->grid);
  op.rate(dQ, base, level, out);
  return out;
}

PerturbationField run_tangent_linear(
    const std::shared_ptr<const Discretization>& disc, const BaseStateFn& base,
    const SourceSet& perturbation,
    const std::function<void(std::size_t, const PerturbationField&)>& observer) {
  const Discretization& d = *disc;
  TangentLinearOperator op(disc, SourceForcing(d.grid, perturbation));
  Rk4Integrator<PerturbationField> rk;
  PerturbationField dQ(d.grid);
  if (observer) observer(0, dQ);

  StateField lo = base(0);
  StateField hi = lo;
  StateField mid = lo;
  const double dt = d.dt();
  for (std::size_t n = 0; n < d.settings.steps; ++n) {
    hi = base(n + 1);
    mid.assign_axpy(lo, 1.0, hi);
    mid.scale(0.5);
    rk.advance(dQ, static_cast<double>(n), 1.0,
               [&](const PerturbationField& s, double level, PerturbationField& r) {
                 const double off = level - static_cast<double>(n);
                 const StateField& b = off == 0.0 ? lo : (off == 1.0 ? hi : mid);
                 op.rate(s, b, level, r, dt);
               });
    apply_filter(d, dQ);
    const std::string bad = dQ.first_nonfinite_component();
    if (!bad.empty()) {
      throw NumericalError("tangent-linear step " + std::to_string(n + 1) +
                           ": non-finite values in component '" + bad + "'");
    }
    if (observer) observer(n + 1, dQ);
    std::swap(lo, hi);
  }
  return dQ;
}

}  // namespace adjsound

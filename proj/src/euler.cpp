#include "adjsound/euler.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "adjsound/errors.hpp"
#include "adjsound/parallel.hpp"

namespace adjsound {

std::size_t step_count(double duration_s, double sample_rate_hz) {
  if (!(duration_s > 0.0) || !(sample_rate_hz > 0.0)) {
    throw ConfigError("time span and sample rate must be positive");
  }
  return static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
}

void check_cfl(const Grid& grid, const GasModel& gas, double dt) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  const double c = gas.sound_speed();
  const double cfl = c * dt / grid.min_spacing();
  if (cfl > 1.0 + 1e-12) {
    const double dt_max = grid.min_spacing() / c;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "CFL number %.4f exceeds 1; admissible dt <= %.6e s (sample rate >= %.2f Hz)",
                  cfl, dt_max, 1.0 / dt_max);
    throw ConfigError(buf);
  }
}

Discretization::Discretization(const Grid& g, const SolverSettings& s)
    : grid(g),
      settings(s),
      scheme(g),
      filter(g, s.filter_alpha),
      sponge(sponge_coefficients(g, s.sponge, s.gas.sound_speed())),
      reference(quiescent_state(g, s.gas)) {
  settings.gas.validate();
  check_cfl(grid, settings.gas, settings.dt());
}

void check_state(const StateField& q, std::size_t step) {
  const std::string bad = q.first_nonfinite_component();
  if (!bad.empty()) {
    throw NumericalError("step " + std::to_string(step) + ": non-finite values in component '" +
                         bad + "'");
  }
  const Grid& grid = q.grid();
  for (const int c : {0, q.pressure_index()}) {
    const double* v = q.component(c).data();
    for (std::size_t i = 0; i < q.component(c).size(); ++i) {
      if (v[i] <= 0.0) {
        const Index3 ijk = grid.unravel(i);
        throw NumericalError("step " + std::to_string(step) + ": non-admissible state, " +
                             StateField::component_name(c, q.num_components()) +
                             " <= 0 at node (" + std::to_string(ijk[0]) + ", " +
                             std::to_string(ijk[1]) + ", " + std::to_string(ijk[2]) + ")");
      }
    }
  }
}

EulerOperator::EulerOperator(std::shared_ptr<const Discretization> disc, SourceForcing forcing)
    : disc_(std::move(disc)), forcing_(std::move(forcing)) {
  const std::size_t n = disc_->grid.size();
  const int nc = disc_->grid.dim() + 2;
  flux_.assign(nc, std::vector<double>(n));
  dflux_.assign(nc, std::vector<double>(n));
  acc_.assign(nc, std::vector<double>(n));
  dp_.assign(n, 0.0);
}

void EulerOperator::rate(const StateField& q, double level, StateField& out, double scale) {
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

  if (!(out.grid() == grid)) out = StateField(grid);
  for (auto& a : acc_) std::fill(a.begin(), a.end(), 0.0);

  const double* rho = q.rho().data();
  const double* p = q.p().data();
  const double* u[3] = {q.u(0).data(), dim > 1 ? q.u(1).data() : nullptr,
                        dim > 2 ? q.u(2).data() : nullptr};

  for (int a = 0; a < dim; ++a) {
    const double* ua = u[a];
    parallel_for(n, [&](std::size_t i) {
      const double mflux = rho[i] * ua[i];
      flux_[0][i] = mflux;
      for (int j = 0; j < dim; ++j) flux_[1 + j][i] = mflux * u[j][i] + (j == a ? p[i] : 0.0);
      flux_[np][i] = g1 * ua[i] * p[i];
    });
    for (int c = 0; c < nc; ++c) disc.scheme.derivative(flux_[c].data(), dflux_[c].data(), a);
    disc.scheme.derivative(p, dp_.data(), a);

    const std::size_t len = static_cast<std::size_t>(grid.count(a));
    const std::size_t stride = grid.stride(a);
    for_each_line_block(grid, a, [&](std::size_t base, std::size_t r0, std::size_t r1) {
      for (std::size_t m = 0; m < len; ++m) {
        const bool face = cbc && (m == 0 || m + 1 == len);
        for (std::size_t r = r0; r < r1; ++r) {
          const std::size_t i = base + m * stride + r;
          if (!face) {
            for (int c = 0; c < nc; ++c) acc_[c][i] -= dflux_[c][i];
            acc_[np][i] += ua[i] * dp_[i];
            continue;
          }
          const int side = m == 0 ? 0 : 1;
          double w[5]{}, dw[5]{}, contrib[5]{};
          w[0] = rho[i];
          dw[0] = disc.scheme.boundary_derivative(rho, i, a, side);
          for (int j = 0; j < dim; ++j) {
            w[1 + j] = u[j][i];
            dw[1 + j] = disc.scheme.boundary_derivative(u[j], i, a, side);
          }
          w[np] = p[i];
          dw[np] = disc.scheme.boundary_derivative(p, i, a, side);
          characteristic_rate(w, dw, gamma, dim, a, side, contrib);
          acc_[0][i] += contrib[0];
          for (int j = 0; j < dim; ++j) acc_[1 + j][i] += rho[i] * contrib[1 + j] + w[1 + j] * contrib[0];
          acc_[np][i] += contrib[np] / gm1;
        }
      }
    });
  }

  forcing_.add(level, disc.dt(), acc_[np].data(), 1.0);

  const double* sponge = disc.sponge.data();
  parallel_for(n, [&](std::size_t i) {
    const double rr = acc_[0][i];
    const double s = sponge[i];
    out.rho()[i] = scale * (rr - s * (rho[i] - disc.reference.rho()[i]));
    for (int j = 0; j < dim; ++j) {
      const double du = (acc_[1 + j][i] - u[j][i] * rr) / rho[i];
      out.u(j)[i] = scale * (du - s * (u[j][i] - disc.reference.u(j)[i]));
    }
    out.p()[i] = scale * (gm1 * acc_[np][i] - s * (p[i] - disc.reference.p()[i]));
  });
}

StateField euler_rhs(const StateField& q, const SourceSet& sources, double level,
                     const std::shared_ptr<const Discretization>& disc) {
  check_state(q, static_cast<std::size_t>(std::max(0.0, level)));
  EulerOperator op(disc, SourceForcing(disc->grid, sources));
  StateField out(disc->grid);
  op.rate(q, level, out);
  return out;
}

ForwardStepper::ForwardStepper(std::shared_ptr<const Discretization> disc, SourceForcing forcing)
    : op_(std::move(disc), std::move(forcing)) {}

void ForwardStepper::step(StateField& q, std::size_t n) {
  const double dt = op_.discretization().dt();
  rk_.advance(q, static_cast<double>(n), 1.0,
              [&](const StateField& s, double level, StateField& r) { op_.rate(s, level, r, dt); });
  apply_filter(op_.discretization(), q);
}

}  // namespace adjsound

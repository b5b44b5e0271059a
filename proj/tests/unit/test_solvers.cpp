#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "adjsound/adjoint.hpp"
#include "adjsound/blob.hpp"
#include "adjsound/errors.hpp"
#include "adjsound/forward.hpp"
#include "adjsound/linearization.hpp"
#include "adjsound/objective.hpp"
#include "adjsound/tangent.hpp"
#include "adjsound/verification.hpp"

using namespace adjsound;

namespace {

constexpr double kPi = std::numbers::pi;

std::shared_ptr<const Discretization> small_disc(int n, std::size_t steps, double cfl = 0.6) {
  const Grid g = build_grid({0.4, 0.4}, {n, n});
  SolverSettings s;
  s.sample_rate_hz = 343.0 / g.spacing(0) / cfl;
  s.steps = steps;
  s.sponge.width_nodes = 6;
  return std::make_shared<Discretization>(g, s);
}

MonopoleSource tone(const Grid& g, Vec3 at, std::size_t steps, double dt, double f) {
  MonopoleSource m;
  m.center = at;
  m.half_width = 2.0 * g.spacing(0);
  for (std::size_t n = 0; n <= steps; ++n) {
    const double t = n * dt;
    const double w = std::sin(kPi * t / (steps * dt));
    m.signal.push_back(1e4 * w * w * std::sin(2.0 * kPi * f * t));
  }
  return m;
}

// Flux functions written out independently of the solver: conserved
// U = [rho, rho u_j, p/(g-1)], flux F^i = [rho u_i, rho u_i u_j + p d_ij, g p u_i/(g-1)].
std::vector<double> conserved(const std::vector<double>& q, double gamma, int dim) {
  std::vector<double> U(dim + 2);
  U[0] = q[0];
  for (int j = 0; j < dim; ++j) U[1 + j] = q[0] * q[1 + j];
  U[dim + 1] = q[dim + 1] / (gamma - 1.0);
  return U;
}

std::vector<double> flux(const std::vector<double>& q, double gamma, int dim, int i) {
  std::vector<double> F(dim + 2);
  const double p = q[dim + 1];
  F[0] = q[0] * q[1 + i];
  for (int j = 0; j < dim; ++j) F[1 + j] = q[0] * q[1 + i] * q[1 + j] + (i == j ? p : 0.0);
  F[dim + 1] = gamma * p * q[1 + i] / (gamma - 1.0);
  return F;
}

}  // namespace

TEST(Forward, QuiescentStateStaysExactlyQuiescent) {
  auto disc = small_disc(16, 20);
  const ForwardResult r = run_forward(disc, {});
  EXPECT_TRUE(r.final_state == disc->reference);
}

TEST(Forward, RecordsEveryLevelAtEveryMicrophone) {
  auto disc = small_disc(24, 40);
  const Grid& g = disc->grid;
  const MicrophoneArray mics = MicrophoneArray::create(g, {{0.3, 0.2, 0.0}, {0.1, 0.1, 0.0}});
  ForwardOptions o;
  o.microphones = &mics;
  const ForwardResult r = run_forward(disc, {tone(g, {0.2, 0.2, 0.0}, 40, disc->dt(), 3000.0)}, o);
  ASSERT_EQ(r.recording.num_channels(), 2u);
  EXPECT_EQ(r.recording.num_samples(), 41u);
  EXPECT_EQ(r.trajectory.size(), 41u);
  EXPECT_EQ(r.recording.channels[0][0], 0.0);
  EXPECT_NE(r.recording.channels[0][40], 0.0);
  EXPECT_NEAR(r.recording.channels[1][40], r.trajectory.state(40).p()[mics.nodes[1]] - disc->gas().p_ref, 1e-9);
}

TEST(Forward, SymmetricSourceGivesSymmetricField) {
  auto disc = small_disc(25, 30);
  const Grid& g = disc->grid;
  const ForwardResult r = run_forward(disc, {tone(g, {0.2, 0.2, 0.0}, 30, disc->dt(), 2500.0)});
  const ScalarField& p = r.final_state.p();
  for (int i = 0; i < 25; ++i) {
    for (int j = 0; j < 25; ++j) {
      // Mirror images agree to roundoff relative to the ambient pressure.
      EXPECT_NEAR(p.at(i, j), p.at(24 - i, j), 1e-11 * disc->gas().p_ref);
      EXPECT_NEAR(p.at(i, j), p.at(j, i), 1e-11 * disc->gas().p_ref);
    }
  }
}

TEST(Forward, BlowUpIsANumericalError) {
  auto disc = small_disc(16, 5);
  StateField q = disc->reference;
  q.p()[40] = -1.0;
  ForwardOptions o;
  o.initial = q;
  EXPECT_THROW(run_forward(disc, {}, o), NumericalError);
}

TEST(Forward, CflAboveOneIsRejected) {
  const Grid g = build_grid({0.4, 0.4}, {16, 16});
  SolverSettings s;
  s.sample_rate_hz = 343.0 / g.spacing(0) / 1.2;
  s.steps = 1;
  EXPECT_THROW(Discretization(g, s), ConfigError);
}

TEST(Trajectory, CheckpointedStatesAreBitIdentical) {
  auto disc = small_disc(20, 30);
  auto settings = disc->settings;
  settings.storage = StoragePolicy::Checkpointed;
  settings.checkpoint_stride = 7;
  auto cdisc = std::make_shared<Discretization>(disc->grid, settings);
  const SourceSet src{tone(disc->grid, {0.15, 0.22, 0.0}, 30, disc->dt(), 2000.0)};
  const ForwardResult full = run_forward(disc, src);
  const ForwardResult ck = run_forward(cdisc, src);
  ASSERT_TRUE(ck.trajectory.checkpointed());
  EXPECT_LT(ck.trajectory.stored_levels(), full.trajectory.stored_levels());
  for (std::size_t n : {30u, 0u, 13u, 14u, 29u, 7u}) EXPECT_TRUE(ck.trajectory.state(n) == full.trajectory.state(n)) << n;
}

TEST(Linearization, MatricesMatchNumericalJacobians) {
  const GasModel gas = GasModel::air();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int dim : {2, 3}) {
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> q(dim + 2);
      q[0] = 1.2 * (1.0 + 0.3 * u(rng));
      for (int j = 0; j < dim; ++j) q[1 + j] = 50.0 * u(rng);
      q[dim + 1] = gas.p_ref * (1.0 + 0.3 * u(rng));
      const LinearizationMatrices m = assemble_matrices(q[0], {q[1], q[2], dim == 3 ? q[3] : 0.0}, q[dim + 1], gas, dim);
      for (int c = 0; c < dim + 2; ++c) {
        std::vector<double> qp = q, qm = q;
        const double h = 1e-6 * std::max(1.0, std::abs(q[c]));
        qp[c] += h;
        qm[c] -= h;
        const std::vector<double> Up = conserved(qp, gas.gamma, dim), Um = conserved(qm, gas.gamma, dim);
        for (int r = 0; r < dim + 2; ++r) {
          const double fd = (Up[r] - Um[r]) / (2.0 * h);
          EXPECT_NEAR(m.A(r, c), fd, 1e-6 * std::max(1.0, std::abs(fd)) + 1e-12 * std::abs(Up[r]) / h);
        }
        for (int i = 0; i < dim; ++i) {
          const std::vector<double> Fp = flux(qp, gas.gamma, dim, i), Fm = flux(qm, gas.gamma, dim, i);
          for (int r = 0; r < dim + 2; ++r) {
            const double fd = (Fp[r] - Fm[r]) / (2.0 * h);
            // Central differences lose about eps |F| / h to cancellation.
            EXPECT_NEAR(m.B[i](r, c), fd, 1e-6 * std::max(1.0, std::abs(fd)) + 1e-12 * std::abs(Fp[r]) / h);
          }
        }
      }
      const SmallMatrix I = m.A * m.A_inverse;
      const SmallMatrix J = m.A_tilde * m.A.transposed();
      for (int r = 0; r < dim + 2; ++r) {
        for (int c = 0; c < dim + 2; ++c) {
          EXPECT_NEAR(I(r, c), r == c ? 1.0 : 0.0, 1e-12);
          EXPECT_NEAR(J(r, c), r == c ? 1.0 : 0.0, 1e-12);
        }
      }
    }
  }
}

TEST(Linearization, QuiescentBaseHasNoConvectiveTerms) {
  const GasModel gas = GasModel::air();
  const LinearizationMatrices m = assemble_matrices(gas.rho_ref, {0.0, 0.0, 0.0}, gas.p_ref, gas, 3);
  for (int i = 0; i < 3; ++i) EXPECT_TRUE(m.C[i].is_zero());
  const Grid g = build_grid({1.0, 1.0}, {8, 8});
  const BaseFeatures f = base_features(quiescent_state(g, gas));
  EXPECT_FALSE(f.flow);
  EXPECT_FALSE(f.pressure_gradient);
  EXPECT_THROW(assemble_matrices(0.0, {}, 1.0, gas, 2), NumericalError);
}

TEST(Objective, ConstantMismatchIntegratesExactly) {
  // One probe with a constant 2 Pa mismatch over all levels: J = 1/2 * 4 * mass * dV * T.
  const Grid g = build_grid({0.4, 0.4}, {21, 21});
  const double dt = 1e-4;
  const std::size_t levels = 11;
  const MicrophoneArray mics = MicrophoneArray::create(g, {{0.2, 0.2, 0.0}});
  Recording target{1.0 / dt, {"m"}, {std::vector<double>(levels, -2.0)}};
  const ObjectiveSpec spec = microphone_objective(g, mics, target, 0.04);
  Recording zero = target;
  zero.channels[0].assign(levels, 0.0);
  const double mass = spec.probes[0].support.mass();
  const double expected = 0.5 * 4.0 * mass * g.cell_measure() * (levels - 1) * dt;
  EXPECT_NEAR(evaluate_objective(zero, spec, g, dt), expected, 1e-12 * expected);

  // Field form agrees with the recording form.
  const GasModel gas = GasModel::air();
  ScalarField p(g, gas.p_ref);
  double field_J = 0.0;
  for (std::size_t n = 0; n < levels; ++n) field_J += objective_increment(p, spec, n, levels, gas.p_ref, dt);
  EXPECT_NEAR(field_J, expected, 1e-12 * expected);
}

TEST(Objective, WindowAndTrapezoidWeights) {
  ObjectiveSpec s;
  s.window_begin = 2;
  s.window_end = 5;
  EXPECT_EQ(s.time_weight(1, 10), 0.0);
  EXPECT_EQ(s.time_weight(2, 10), 0.5);
  EXPECT_EQ(s.time_weight(3, 10), 1.0);
  EXPECT_EQ(s.time_weight(5, 10), 0.5);
  EXPECT_EQ(s.time_weight(6, 10), 0.0);
  EXPECT_EQ(s.time_weight(4, 5), 0.5);
}

TEST(Objective, LengthMismatchThrows) {
  const Grid g = build_grid({0.4, 0.4}, {21, 21});
  const MicrophoneArray mics = MicrophoneArray::create(g, {{0.2, 0.2, 0.0}});
  Recording target{1e4, {"m"}, {std::vector<double>(5, 0.0)}};
  const ObjectiveSpec spec = microphone_objective(g, mics, target, 0.04);
  Recording rec = target;
  rec.channels[0].resize(7);
  EXPECT_THROW(evaluate_objective(rec, spec, g, 1e-4), ShapeError);
}

TEST(Adjoint, DualityHoldsAndImprovesUnderRefinement) {
  const CheckResult coarse = check_duality(3, 32);
  const CheckResult fine = check_duality(3, 63);
  EXPECT_TRUE(coarse.passed) << coarse.detail;
  EXPECT_LT(fine.value, coarse.value);
}

TEST(Adjoint, ZeroForcingGivesZeroAdjoint) {
  auto disc = small_disc(16, 10);
  const StateField& base = disc->reference;
  const AdjointTrajectory a = run_adjoint(
      disc, [&](std::size_t) -> const StateField& { return base; }, [](std::size_t, const StateField&, double*) {});
  ASSERT_EQ(a.size(), 11u);
  for (const ScalarField& p : a.p_star) EXPECT_EQ(p.max_abs(), 0.0);
}

TEST(Adjoint, GradientAgreesWithFiniteDifferences) {
  const CheckResult r = check_gradient(2);
  EXPECT_TRUE(r.passed) << r.detail;
}

TEST(Tangent, MatchesDifferencedNonlinearRate) {
  // Conservative rate R(q) = A(q) E(q); (R(q0 + e dq) - R(q0)) / e must approach
  // the tangent rate of dQ = A(q0) dq with an error linear in e.
  const Grid g = build_grid({0.4, 0.4}, {24, 24});
  SolverSettings s;
  s.sample_rate_hz = 343.0 / g.spacing(0) / 0.6;
  s.steps = 1;
  s.sponge.enabled = false;
  auto disc = std::make_shared<Discretization>(g, s);
  const GasModel& gas = disc->gas();
  auto bump = [&](const Vec3& x, double cx, double cy) {
    return std::exp(-(std::pow(x[0] - cx, 2) + std::pow(x[1] - cy, 2)) / 0.006);
  };
  StateField q0 = disc->reference;
  PerturbationField dq(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 x = g.position(i);
    q0.p()[i] += 300.0 * bump(x, 0.18, 0.2);
    q0.rho()[i] += 300.0 * bump(x, 0.18, 0.2) / (343.0 * 343.0);
    q0.u(0)[i] = 4.0 * bump(x, 0.22, 0.17);
    q0.u(1)[i] = -3.0 * bump(x, 0.2, 0.24);
    dq.p()[i] = 100.0 * bump(x, 0.2, 0.21);
    dq.rho()[i] = 2e-4 * bump(x, 0.16, 0.2);
    dq.u(0)[i] = 1.5 * bump(x, 0.21, 0.23);
    dq.u(1)[i] = 2.0 * bump(x, 0.19, 0.18);
  }
  auto conservative_rate = [&](const StateField& q) {
    const StateField E = euler_rhs(q, {}, 0.0, disc);
    StateField R = E;
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (int a = 0; a < 2; ++a) R.u(a)[i] = q.rho()[i] * E.u(a)[i] + q.u(a)[i] * E.rho()[i];
      R.p()[i] = E.p()[i] / (gas.gamma - 1.0);
    }
    return R;
  };
  const PerturbationField tl = tangent_linear_rhs(to_conservative(dq, q0, gas), q0, {}, 0.0, disc);
  const StateField R0 = conservative_rate(q0);
  auto error_at = [&](double e) {
    StateField q = q0;
    for (int c = 0; c < q.num_components(); ++c) {
      for (std::size_t i = 0; i < g.size(); ++i) q.component(c)[i] += e * dq.component(c)[i];
    }
    const StateField R = conservative_rate(q);
    double err = 0.0;
    for (int c = 0; c < q.num_components(); ++c) {
      for (int j = 1; j < 23; ++j) {
        for (int k = 1; k < 23; ++k) {
          const std::size_t i = g.index(k, j, 0);
          const double fd = (R.component(c)[i] - R0.component(c)[i]) / e;
          err = std::max(err, std::abs(fd - tl.component(c)[i]) / std::max(1.0, tl.component(c).max_abs()));
        }
      }
    }
    return err;
  };
  const double e1 = error_at(1e-2), e2 = error_at(1e-3), e3 = error_at(1e-4);
  EXPECT_NEAR(std::log10(e1 / e2), 1.0, 0.1) << e1 << " " << e2;
  EXPECT_NEAR(std::log10(e2 / e3), 1.0, 0.1) << e2 << " " << e3;
}

TEST(Boundary, PlaneWaveLeavesWithoutSponge) {
  // Right-running plane pulse p' = rho c u toward x = 1 with the sponge off.
  const Grid g = build_grid({1.0, 0.1}, {128, 8});
  SolverSettings s;
  s.sample_rate_hz = 343.0 / g.spacing(0) / 0.5;
  s.sponge.enabled = false;
  const double c = 343.0;
  s.steps = static_cast<std::size_t>(0.6 / c * s.sample_rate_hz);
  auto disc = std::make_shared<Discretization>(g, s);
  const double rho0 = disc->gas().rho_ref, amp = 10.0;
  StateField q0 = disc->reference;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double pp = amp * blob_profile(std::abs(g.position(i)[0] - 0.7), 0.03);
    q0.p()[i] += pp;
    q0.rho()[i] += pp / (c * c);
    q0.u(0)[i] = pp / (rho0 * c);
  }
  ForwardOptions o;
  o.initial = q0;
  o.keep_trajectory = false;
  const ForwardResult r = run_forward(disc, {}, o);
  double left = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) left = std::max(left, std::abs(r.final_state.p()[i] - disc->gas().p_ref));
  EXPECT_LT(left / amp, 0.02);
}

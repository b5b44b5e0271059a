#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "adjsound/compact.hpp"
#include "adjsound/errors.hpp"
#include "adjsound/rk4.hpp"
#include "adjsound/tridiagonal.hpp"

using namespace adjsound;

namespace {

constexpr double kPi = std::numbers::pi;

ScalarField sample(const Grid& g, double (*f)(double), int axis) {
  ScalarField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = f(g.position(i)[axis]);
  return out;
}

}  // namespace

TEST(Tridiagonal, SolveReproducesRightHandSide) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::size_t n = 17;
  std::vector<double> sub(n), diag(n), super(n), x(n);
  for (std::size_t i = 0; i < n; ++i) {
    sub[i] = u(rng);
    super[i] = u(rng);
    diag[i] = 3.0 + u(rng);
    x[i] = u(rng);
  }
  const TridiagonalLU lu(sub, diag, super);
  // Dense product as the oracle for A x.
  std::vector<double> rhs(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    rhs[i] = diag[i] * x[i];
    if (i > 0) rhs[i] += sub[i] * x[i - 1];
    if (i + 1 < n) rhs[i] += super[i] * x[i + 1];
  }
  const std::vector<double> solved = tridiagonal_solve(lu, rhs);
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(solved[i], x[i], 1e-13);
  const std::vector<double> back = lu.multiply(x);
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(back[i], rhs[i], 1e-13);
}

TEST(Tridiagonal, StridedMatchesContiguous) {
  const std::size_t n = 9, batch = 3;
  const TridiagonalLU lu = CompactScheme::lhs(n);
  std::vector<double> inter(n * batch);
  for (std::size_t i = 0; i < inter.size(); ++i) inter[i] = std::sin(0.37 * static_cast<double>(i));
  std::vector<double> copy = inter;
  lu.solve_strided(inter.data(), batch, batch);
  for (std::size_t r = 0; r < batch; ++r) {
    std::vector<double> line(n);
    for (std::size_t m = 0; m < n; ++m) line[m] = copy[m * batch + r];
    lu.solve_in_place(line);
    for (std::size_t m = 0; m < n; ++m) EXPECT_DOUBLE_EQ(inter[m * batch + r], line[m]);
  }
}

TEST(Tridiagonal, ZeroPivotThrows) {
  EXPECT_THROW(TridiagonalLU({0.0, 1.0}, {0.0, 1.0}, {1.0, 0.0}), NumericalError);
}

TEST(Compact, ConstantsDifferentiateToExactZero) {
  const Grid g = build_grid({1.0, 1.0}, {20, 12});
  const ScalarField f(g, 101325.0);
  for (int a = 0; a < 2; ++a) {
    const ScalarField d = compact_d1(f, a, CompactScheme(g));
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(d[i], 0.0);
  }
}

TEST(Compact, QuadraticsAreExactEverywhere) {
  const Grid g = build_grid({2.0, 1.0}, {24, 10});
  const CompactScheme scheme(g);
  const ScalarField f = sample(g, [](double x) { return 3.0 * x * x - x + 2.0; }, 0);
  const ScalarField d = compact_d1(f, 0, scheme);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(d[i], 6.0 * g.position(i)[0] - 1.0, 1e-10);
}

TEST(Compact, InteriorOrderExceedsFivePointFive) {
  double err[2];
  const int ns[2] = {64, 128};
  for (int m = 0; m < 2; ++m) {
    const Grid g = build_grid({1.0, 1.0}, {kMinAxisNodes, ns[m]});
    const ScalarField f = sample(g, [](double x) { return std::sin(2.0 * kPi * x); }, 1);
    const ScalarField d = compact_d1(f, 1, CompactScheme(g));
    err[m] = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = g.position(i)[1];
      if (x < 0.25 || x > 0.75) continue;
      err[m] = std::max(err[m], std::abs(d[i] - 2.0 * kPi * std::cos(2.0 * kPi * x)));
    }
  }
  EXPECT_GE(std::log2(err[0] / err[1]), 5.5);
}

TEST(Compact, ThirdAxisMatchesFirst) {
  const Grid g = build_grid({1.0, 1.0, 1.0}, {12, 9, 16});
  const Grid line = build_grid({1.0, 1.0}, {16, 9});
  const ScalarField f3 = sample(g, [](double x) { return std::exp(x); }, 2);
  const ScalarField f1 = sample(line, [](double x) { return std::exp(x); }, 0);
  const ScalarField d3 = compact_d1(f3, 2, CompactScheme(g));
  const ScalarField d1 = compact_d1(f1, 0, CompactScheme(line));
  for (int k = 0; k < 16; ++k) EXPECT_NEAR(d3.at(5, 4, k), d1.at(k, 0), 1e-12);
}

TEST(Filter, ConstantsPassBitExactly) {
  const Grid g = build_grid({1.0, 1.0}, {16, 16});
  ScalarField f(g, 1.2345678901234567);
  const ScalarField out = compact_filter_apply(f, 0, CompactFilter(g));
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(out[i], f[i]);
}

TEST(Filter, InteriorMatchesTransferFunction) {
  // Far from the ends a cosine of wavenumber w is scaled by
  // (a0 + a1 cos w + a2 cos 2w + a3 cos 3w) / (1 + 2 alpha cos w).
  const double af = 0.49;
  const double a0 = (11.0 + 10.0 * af) / 16.0, a1 = (15.0 + 34.0 * af) / 32.0;
  const double a2 = (-3.0 + 6.0 * af) / 16.0, a3 = (1.0 - 2.0 * af) / 32.0;
  const Grid g = build_grid({1.0, 1.0}, {400, 8});
  const CompactFilter filter(g, af);
  for (double w : {kPi, 0.95 * kPi, 0.8 * kPi, 0.5 * kPi, 0.1 * kPi}) {
    const double T = (a0 + a1 * std::cos(w) + a2 * std::cos(2 * w) + a3 * std::cos(3 * w)) / (1.0 + 2.0 * af * std::cos(w));
    ScalarField f(g);
    for (std::size_t i = 0; i < g.size(); ++i) f[i] = std::cos(w * g.unravel(i)[0]);
    const ScalarField out = compact_filter_apply(f, 0, filter);
    for (int k = 150; k < 250; ++k) EXPECT_NEAR(out.at(k, 2), T * f.at(k, 2), 1e-9) << w << " " << k;
  }
}

TEST(Filter, SmoothFieldsBarelyChange) {
  const Grid g = build_grid({1.0, 1.0}, {64, 8});
  const ScalarField f = sample(g, [](double x) { return std::sin(2.0 * kPi * x); }, 0);
  const ScalarField out = compact_filter_apply(f, 0, CompactFilter(g));
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(out[i], f[i], 1e-5);
}

TEST(Rk4, SingleStepMatchesTaylorPolynomial) {
  // y' = -y, y(0) = 1: one RK4 step is the fourth-order Taylor polynomial of exp(-dt).
  const double dt = 0.1;
  const double y = rk4_advance(1.0, 0.0, dt, [](double s, double) { return -s; });
  const double taylor = 1.0 - dt + dt * dt / 2.0 - dt * dt * dt / 6.0 + dt * dt * dt * dt / 24.0;
  EXPECT_NEAR(y, 0.9048375, 1e-12);
  EXPECT_NEAR(y, taylor, 1e-15);
}

TEST(Rk4, TimeDependentRateUsesStageTimes) {
  // y' = t integrates exactly: y(1) = 1/2 in one step.
  const double y = rk4_advance(0.0, 0.0, 1.0, [](double, double t) { return t; });
  EXPECT_NEAR(y, 0.5, 1e-15);
}

TEST(Rk4, OscillatorOrderAboveThreePointNine) {
  auto error = [](int steps) {
    std::vector<double> y{1.0, 0.0};
    const double dt = 2.0 * kPi / steps;
    Rk4Integrator<std::vector<double>> rk;
    for (int n = 0; n < steps; ++n) {
      rk.advance(y, n * dt, dt, [](const std::vector<double>& s, double, std::vector<double>& out) {
        out = {s[1], -s[0]};
      });
    }
    return std::hypot(y[0] - 1.0, y[1]);
  };
  EXPECT_GE(std::log2(error(50) / error(100)), 3.9);
}

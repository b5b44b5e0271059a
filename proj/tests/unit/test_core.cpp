#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "adjsound/blob.hpp"
#include "adjsound/errors.hpp"
#include "adjsound/field.hpp"
#include "adjsound/grid.hpp"
#include "adjsound/microphones.hpp"
#include "adjsound/sources.hpp"

using namespace adjsound;

TEST(Grid, SpacingFromExtentAndCount) {
  const Grid g = build_grid({1.0, 0.5}, {11, 26});
  EXPECT_DOUBLE_EQ(g.spacing(0), 0.1);
  EXPECT_DOUBLE_EQ(g.spacing(1), 0.02);
  EXPECT_DOUBLE_EQ(g.cell_measure(), 0.002);
  EXPECT_DOUBLE_EQ(g.min_spacing(), 0.02);
  EXPECT_EQ(g.size(), 11u * 26u);
}

TEST(Grid, IndexAndUnravelRoundTrip) {
  const Grid g = build_grid({1.0, 1.0, 1.0}, {9, 10, 11});
  for (std::size_t i = 0; i < g.size(); i += 7) {
    const Index3 ijk = g.unravel(i);
    EXPECT_EQ(g.index(ijk[0], ijk[1], ijk[2]), i);
  }
  EXPECT_EQ(g.stride(0), 1u);
  EXPECT_EQ(g.stride(1), 9u);
  EXPECT_EQ(g.stride(2), 90u);
}

TEST(Grid, TooFewNodesNamesTheAxis) {
  try {
    build_grid({1.0, 1.0}, {16, 5});
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("axis 1"), std::string::npos) << e.what();
  }
}

TEST(Grid, NearestNodeClampsIntoDomain) {
  const Grid g = build_grid({1.0, 1.0}, {11, 11});
  EXPECT_EQ(g.nearest_node({0.34, 0.76, 0.0}), (Index3{3, 8, 0}));
  EXPECT_EQ(g.nearest_node({-3.0, 7.0, 0.0}), (Index3{0, 10, 0}));
  EXPECT_TRUE(g.contains({1.0, 0.0, 0.0}));
  EXPECT_FALSE(g.contains({1.01, 0.0, 0.0}));
}

TEST(Gas, SoundSpeedFromReferenceState) {
  const GasModel gas = GasModel::from_sound_speed(343.0, 1.4, 1.2);
  EXPECT_NEAR(std::sqrt(gas.gamma * gas.p_ref / gas.rho_ref), 343.0, 1e-12);
  EXPECT_NEAR(gas.sound_speed(), 343.0, 1e-12);
}

TEST(Field, InnerProductOfConstants) {
  const Grid g = build_grid({1.0, 2.0}, {11, 21});
  std::vector<ScalarField> a(5, ScalarField(g, 2.0)), b(5, ScalarField(g, 3.0));
  // 5 levels, 231 nodes, measure 0.01, dt 0.5.
  EXPECT_NEAR(inner_product(a, b, 0.5), 6.0 * 5 * 231 * 0.01 * 0.5, 1e-10);
}

TEST(Field, InnerProductShapeMismatchThrows) {
  const Grid g = build_grid({1.0, 1.0}, {11, 11});
  const Grid h = build_grid({1.0, 1.0}, {12, 11});
  std::vector<ScalarField> a(2, ScalarField(g)), b(2, ScalarField(h)), c(3, ScalarField(g));
  EXPECT_THROW(inner_product(a, b, 1.0), ShapeError);
  EXPECT_THROW(inner_product(a, c, 1.0), ShapeError);
}

TEST(Field, FieldSetLayout) {
  const Grid g = build_grid({1.0, 1.0, 1.0}, {8, 8, 8});
  StateField q(g);
  EXPECT_EQ(q.num_components(), 5);
  EXPECT_EQ(StateField::component_name(0, 5), "rho");
  EXPECT_EQ(StateField::component_name(2, 5), "u2");
  EXPECT_EQ(StateField::component_name(4, 5), "p");
  q.p()[3] = std::nan("");
  EXPECT_EQ(q.first_nonfinite_component(), "p");
}

TEST(CompensatedSum, RecoversSmallTerms) {
  CompensatedSum s;
  s.add(1e16);
  for (int i = 0; i < 1000; ++i) s.add(1.0);
  s.add(-1e16);
  EXPECT_EQ(s.value(), 1000.0);
}

TEST(Blob, HalfValueAtHalfWidth) {
  EXPECT_DOUBLE_EQ(blob_profile(0.0, 0.02), 1.0);
  EXPECT_NEAR(blob_profile(0.02, 0.02), 0.5, 1e-15);
  EXPECT_EQ(blob_profile(4.01 * 0.02, 0.02), 0.0);
}

TEST(Blob, MassMatchesGaussianIntegral) {
  const Grid g = build_grid({1.0, 1.0}, {201, 201});
  const double hw = 0.03;
  const BlobStencil b = blob_stencil(g, {0.5, 0.5, 0.0}, hw);
  // Integral of exp(-ln2 r^2 / hw^2) over a disc of radius 4 hw is
  // pi hw^2 / ln2 * (1 - 2^-16). The cut edge on the lattice costs ~1e-5.
  const double exact = std::numbers::pi * hw * hw / std::log(2.0) * (1.0 - std::pow(2.0, -16.0));
  EXPECT_NEAR(b.mass() * g.cell_measure(), exact, 1e-5 * exact);
}

TEST(Blob, SnappedVersusExactCentre) {
  const Grid g = build_grid({1.0, 1.0}, {11, 11});
  const BlobStencil snapped = blob_stencil(g, {0.52, 0.5, 0.0}, 0.1);
  const BlobStencil exact = blob_stencil_exact(g, {0.52, 0.5, 0.0}, 0.1);
  const std::size_t centre = g.index(5, 5);
  for (std::size_t m = 0; m < snapped.nodes.size(); ++m) {
    if (snapped.nodes[m] == centre) {
      EXPECT_DOUBLE_EQ(snapped.weights[m], 1.0);
    }
  }
  for (std::size_t m = 0; m < exact.nodes.size(); ++m) {
    if (exact.nodes[m] == centre) {
      EXPECT_NEAR(exact.weights[m], blob_profile(0.02, 0.1), 1e-15);
    }
  }
}

TEST(Blob, InvalidInputThrows) {
  const Grid g = build_grid({1.0, 1.0}, {11, 11});
  EXPECT_THROW(blob_stencil(g, {0.5, 0.5, 0.0}, 0.0), ConfigError);
  EXPECT_THROW(blob_stencil(g, {1.5, 0.5, 0.0}, 0.1), ConfigError);
}

TEST(Sources, PathEasesInAndOut) {
  SourcePath path{{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, 0.0, 2.0};
  EXPECT_DOUBLE_EQ(path.position(-1.0)[0], 0.0);
  EXPECT_NEAR(path.position(1.0)[0], 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(path.position(3.0)[0], 1.0);
  // Slow near the ends: the first tenth covers far less than a tenth of the way.
  EXPECT_LT(path.position(0.2)[0], 0.05);
}

TEST(Sources, SignalInterpolatesLinearlyBetweenLevels) {
  MonopoleSource s;
  s.signal = {0.0, 2.0, 4.0};
  EXPECT_DOUBLE_EQ(s.signal_at(0.5), 1.0);
  EXPECT_DOUBLE_EQ(s.signal_at(1.25), 2.5);
  EXPECT_DOUBLE_EQ(s.signal_at(2.0), 4.0);
  EXPECT_DOUBLE_EQ(s.signal_at(3.0), 0.0);
  EXPECT_DOUBLE_EQ(s.signal_at(-0.5), 0.0);
}

TEST(Sources, ForcingAddsBlobTimesSignal) {
  const Grid g = build_grid({1.0, 1.0}, {21, 21});
  MonopoleSource s;
  s.center = {0.5, 0.5, 0.0};
  s.half_width = 0.1;
  s.signal = {1.0, 3.0};
  const SourceForcing forcing(g, {s});
  std::vector<double> target(g.size(), 0.0);
  forcing.add(0.5, 1.0, target.data(), 2.0);
  EXPECT_DOUBLE_EQ(target[g.index(10, 10)], 4.0);
  EXPECT_NEAR(target[g.index(12, 10)], 4.0 * 0.5, 1e-14);
}

TEST(Microphones, SnapAndNameAndRejectOutside) {
  const Grid g = build_grid({1.0, 1.0}, {11, 11});
  const MicrophoneArray a = MicrophoneArray::create(g, {{0.31, 0.0, 0.0}, {1.0, 0.68, 0.0}});
  EXPECT_EQ(a.nodes[0], g.index(3, 0));
  EXPECT_EQ(a.nodes[1], g.index(10, 7));
  EXPECT_EQ(a.names[1], "mic_001");
  try {
    MicrophoneArray::create(g, {{0.5, 0.5, 0.0}, {1.2, 0.5, 0.0}});
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("indices 1"), std::string::npos) << e.what();
  }
}

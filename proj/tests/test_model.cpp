#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fixtures.hpp"
#include "pwl3/error.hpp"
#include "pwl3/model.hpp"

using namespace pwl3;

TEST(Model, BuildSystemMatchesNormalForm) {
  const CanonicalParams p = fixtures::family_a();
  const PiecewiseSystem sys = build_system(p);
  EXPECT_EQ(sys.field(Zone::kCentral).A, (Mat2{0.0, -1.0, 1.0, 1.0}));
  EXPECT_EQ(sys.field(Zone::kCentral).B, (Vec2{0.0, -1.09}));
  EXPECT_NEAR(p.f2, -1.77, 1e-15);
  EXPECT_EQ(sys.field(Zone::kMinus).A, (Mat2{-1.0, -1.0, 1.0 + 1.09 + 4.0, 1.0}));
  EXPECT_EQ(sys.field(Zone::kPlus).B, (Vec2{1.4, p.f2}));
}

TEST(Model, ZeroParamsGiveRotation) {
  const PiecewiseSystem sys = build_system({});
  EXPECT_EQ(sys.field(Zone::kCentral).A, (Mat2{0.0, -1.0, 1.0, 0.0}));
  EXPECT_EQ(sys.field(Zone::kCentral).B, (Vec2{0.0, 0.0}));
  const std::vector<double> ys{-3.0, 0.0, 2.5};
  EXPECT_EQ(continuity_defect({}, ys), 0.0);
}

TEST(Model, ContinuityOnRandomParams) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<double> ys;
  for (int i = 0; i < 100; ++i) ys.push_back(-1000.0 + 20.0 * i);
  for (int trial = 0; trial < 200; ++trial) {
    const CanonicalParams p{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
    EXPECT_LE(continuity_defect(p, ys), 1e-12);
  }
}

TEST(Model, CentralDeterminantIsOne) {
  const ZoneSpectrum s = zone_spectrum(fixtures::family_a(), Zone::kCentral);
  EXPECT_EQ(s.d, 1.0);
  EXPECT_NEAR(s.alpha * s.alpha + s.beta * s.beta, 1.0, 1e-15);
  EXPECT_NEAR(s.gamma, 1.0 / std::sqrt(3.0), 1e-15);
}

TEST(Model, EquilibriaSolveTheirFields) {
  for (double b2 : {-2.0, -1.09, -0.3, 0.4, 1.7}) {
    const CanonicalParams p = fixtures::family_a(b2);
    const PiecewiseSystem sys = build_system(p);
    for (Zone z : {Zone::kMinus, Zone::kCentral, Zone::kPlus}) {
      const ZoneSpectrum s = zone_spectrum(p, z);
      const Vec2 v = sys.field(z)(s.equilibrium);
      EXPECT_NEAR(v.x, 0.0, 1e-13);
      EXPECT_NEAR(v.y, 0.0, 1e-13);
    }
  }
}

TEST(Model, LocalityByCase) {
  auto loc = [](double b2, Zone z) { return zone_spectrum(fixtures::family_a(b2), z).locality; };
  EXPECT_EQ(loc(-2.0, Zone::kMinus), Locality::kVirtual);
  EXPECT_EQ(loc(-2.0, Zone::kCentral), Locality::kVirtual);
  EXPECT_EQ(loc(-1.09, Zone::kPlus), Locality::kReal);
  EXPECT_EQ(loc(0.0, Zone::kCentral), Locality::kReal);
  EXPECT_EQ(loc(0.0, Zone::kMinus), Locality::kVirtual);
  EXPECT_EQ(loc(0.0, Zone::kPlus), Locality::kVirtual);
  EXPECT_EQ(loc(-1.0, Zone::kCentral), Locality::kOnBoundary);
  EXPECT_EQ(loc(-1.0, Zone::kPlus), Locality::kOnBoundary);
  EXPECT_EQ(loc(1.0, Zone::kMinus), Locality::kOnBoundary);
  EXPECT_EQ(loc(1.0, Zone::kCentral), Locality::kOnBoundary);
}

TEST(Model, SharedEquilibriumAtMinusOne) {
  const CanonicalParams p = fixtures::family_a(-1.0);
  EXPECT_EQ(zone_spectrum(p, Zone::kCentral).equilibrium, (Vec2{1.0, 0.0}));
  EXPECT_EQ(zone_spectrum(p, Zone::kPlus).equilibrium, (Vec2{1.0, 0.0}));
}

TEST(Model, Table1Rows) {
  EXPECT_EQ(table1_case(-2.0), Table1Case::kB2LessMinus1);
  EXPECT_EQ(table1_case(-1.0), Table1Case::kB2EqMinus1);
  EXPECT_EQ(table1_case(0.5), Table1Case::kAbsB2Less1);
  EXPECT_EQ(table1_case(1.0), Table1Case::kB2Eq1);
  EXPECT_EQ(table1_case(3.0), Table1Case::kB2Greater1);
}

TEST(Model, HypothesesOnExamples) {
  for (const CanonicalParams& p : {fixtures::family_a(), fixtures::family_b()}) {
    const HypothesisReport h = check_hypotheses(p);
    EXPECT_TRUE(h.h1);
    EXPECT_TRUE(h.h2);
    EXPECT_EQ(h.center_zone, Zone::kMinus);
    EXPECT_EQ(zone_spectrum(p, Zone::kMinus).t, 0.0);
  }
}

TEST(Model, RealCentralEigenvaluesFailH1) {
  CanonicalParams p = fixtures::family_a();
  p.a1 = 3.0;
  EXPECT_FALSE(check_hypotheses(p).h1);
  try {
    classify_equilibria(p);
    FAIL() << "expected NonFocusZone";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonFocusZone);
  }
}

TEST(Model, SingularZoneIsDegenerate) {
  CanonicalParams p = fixtures::family_a();
  p.a11 = 0.0;
  p.d2 = p.b2 - 1.0;  // det A- = 1 - b2 + d2 = 0
  try {
    zone_spectrum(p, Zone::kMinus);
    FAIL() << "expected DegenerateZone";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateZone);
  }
}

TEST(Model, MirrorIsInvolutionAndFlipsB2) {
  const CanonicalParams p = fixtures::family_b(1.3);
  EXPECT_EQ(mirror(mirror(p)), p);
  EXPECT_EQ(mirror(p).b2, -1.3);
}

TEST(Model, MirrorRotatesTheField) {
  const CanonicalParams p = fixtures::family_a(1.2);
  const PiecewiseSystem s = build_system(p);
  const PiecewiseSystem m = build_system(mirror(p));
  for (double x : {-3.0, -1.0, -0.2, 0.7, 1.0, 2.5}) {
    for (double y : {-2.0, 0.0, 1.5}) {
      const Vec2 v = s({x, y});
      const Vec2 w = m({-x, -y});
      EXPECT_NEAR(w.x, -v.x, 1e-12);
      EXPECT_NEAR(w.y, -v.y, 1e-12);
    }
  }
}

TEST(Model, GammaSignFollowsTrace) {
  const Classification c = classify_equilibria(fixtures::family_a());
  for (const ZoneSpectrum& s : c.spectra) {
    EXPECT_GT(s.beta, 0.0);
    EXPECT_GE(s.gamma * s.t, 0.0);
    EXPECT_EQ(s.gamma == 0.0, s.t == 0.0);
  }
}

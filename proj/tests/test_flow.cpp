#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "pwl3/error.hpp"
#include "pwl3/flow.hpp"

using namespace pwl3;

namespace {

constexpr double kPi = std::numbers::pi;

// Classical RK4 with a fixed small step on one affine field.
Vec2 rk4(const AffineField& f, Vec2 p, double s, int steps = 20000) {
  const double h = s / steps;
  for (int i = 0; i < steps; ++i) {
    const Vec2 k1 = f(p);
    const Vec2 k2 = f(p + (h / 2) * k1);
    const Vec2 k3 = f(p + (h / 2) * k2);
    const Vec2 k4 = f(p + h * k3);
    p = p + (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return p;
}

}  // namespace

TEST(Phi, ValuesAtZeroAndPi) {
  for (double y : {-3.0, -0.5, 0.0, 0.4, 2.0}) {
    EXPECT_EQ(phi(0.0, y), 0.0);
    EXPECT_NEAR(phi(kPi, y), 1.0 + std::exp(kPi * y), 1e-12 * (1.0 + std::exp(kPi * y)));
    EXPECT_NEAR(phi_pi_offset(0.0, y), phi(kPi, y), 1e-12 * (1.0 + std::exp(kPi * y)));
  }
}

TEST(Phi, SeriesMatchesDirectFormAwayFromZero) {
  for (double y : {-2.0, -0.3, 0.0, 0.7, 1.9}) {
    for (double x : {0.05, 0.1, 0.12}) {
      const double direct = 1.0 - std::exp(x * y) * (std::cos(x) - y * std::sin(x));
      EXPECT_NEAR(phi(x, y), direct, 1e-14);
    }
  }
  // leading term (1 + y^2) x^2 / 2
  EXPECT_NEAR(phi(1e-8, 0.5) / (1.25 * 1e-16 / 2.0), 1.0, 1e-7);
}

TEST(Phi, ZeroGammaZerosOnlyAtZeroAndTwoPi) {
  int changes = 0;
  double prev = phi(-20.0, 0.0);
  for (int i = 1; i <= 10000; ++i) {
    const double x = -20.0 + (2.0 * kPi + 20.0) * i / 10000.0;
    const double v = phi(x, 0.0);
    EXPECT_GE(v, -1e-15);
    if (v > 1e-12 && prev <= 1e-12) ++changes;
    prev = v;
  }
  EXPECT_NEAR(phi(2.0 * kPi, 0.0), 0.0, 1e-15);
}

TEST(Phi, SignPatternOnHalfLine) {
  // y > 0: positive on (0, x1), negative on (x1, 2 pi) with x1 in (pi, 2 pi);
  // y < 0: positive on (0, 2 pi). Both are positive on (-pi, 0).
  for (double y : {0.2, 1.0}) {
    int roots = 0;
    double prev = phi(1e-3, y);
    for (int i = 1; i <= 10000; ++i) {
      const double x = 1e-3 + (2.0 * kPi - 2e-3) * i / 10000.0;
      const double v = phi(x, y);
      if ((v > 0) != (prev > 0)) {
        ++roots;
        EXPECT_GT(x, kPi);
      }
      prev = v;
    }
    EXPECT_EQ(roots, 1);
  }
  for (double y : {-0.2, -1.0}) {
    for (int i = 1; i <= 10000; ++i) {
      const double x = (2.0 * kPi - 1e-3) * i / 10000.0;
      EXPECT_GT(phi(x, y), 0.0);
    }
  }
  for (double y : {-1.0, 0.5}) {
    for (int i = 1; i < 1000; ++i) EXPECT_GT(phi(-kPi * i / 1000.0, y), 0.0);
  }
}

TEST(ZoneFlow, IdentityAndFixedPoint) {
  const CanonicalParams p = fixtures::family_a();
  for (Zone z : {Zone::kMinus, Zone::kCentral, Zone::kPlus}) {
    const ZoneFlow f(p, z);
    const Vec2 q{0.3, -1.2};
    EXPECT_EQ(f.at(0.0, q), q);
    const Vec2 e = f.spectrum().equilibrium;
    const Vec2 r = f.at(3.7, e);
    EXPECT_NEAR(r.x, e.x, 1e-12);
    EXPECT_NEAR(r.y, e.y, 1e-12);
  }
}

TEST(ZoneFlow, Semigroup) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> t(-50.0, 50.0), c(-3.0, 3.0);
  const CanonicalParams p = fixtures::family_b();
  for (Zone z : {Zone::kMinus, Zone::kCentral, Zone::kPlus}) {
    const ZoneFlow f(p, z);
    for (int i = 0; i < 200; ++i) {
      const double s = t(rng), u = t(rng);
      const Vec2 q{c(rng), c(rng)};
      // keep magnitudes moderate so the relative check is meaningful
      if (std::abs(f.spectrum().alpha) * (std::abs(s) + std::abs(u)) > 30.0) continue;
      const Vec2 a = f.at(s + u, q);
      const Vec2 b = f.at(s, f.at(u, q));
      const double scale = std::max(1.0, norm(a));
      EXPECT_LE(norm(a - b) / scale, 1e-10);
    }
  }
}

TEST(ZoneFlow, MatchesIndependentIntegration) {
  const CanonicalParams p = fixtures::family_a();
  const ZoneFlow f(p, Zone::kPlus);
  const Vec2 a = f.at(0.7, {1.0, 0.3});
  const Vec2 b = rk4(f.field(), {1.0, 0.3}, 0.7);
  EXPECT_LE(norm(a - b), 1e-10);
}

TEST(ZoneFlow, RealEigenvaluesClosedForm) {
  CanonicalParams p = fixtures::family_a();
  p.a1 = 3.0;
  const ZoneFlow f(p, Zone::kCentral);
  const Vec2 a = f.at(0.4, {0.2, 0.1});
  const Vec2 b = rk4(f.field(), {0.2, 0.1}, 0.4);
  EXPECT_LE(norm(a - b), 1e-10);
}

TEST(ZoneFlow, CentralQuarterTurnAtMinusOne) {
  // b2 = -1: from (-1, 0) the central flow reaches x = 1 after angle atan2(beta, alpha)
  const CanonicalParams p = fixtures::family_a(-1.0, 0.0);
  const ZoneFlow f(p, Zone::kCentral);
  const ZoneSpectrum& s = f.spectrum();
  const double tau = std::atan2(s.beta, s.alpha);
  EXPECT_NEAR(f.at(tau / s.beta, {-1.0, 0.0}).x, 1.0, 1e-14);
}

TEST(Crossing, CenterReturnIsSymmetric) {
  const CanonicalParams p = fixtures::family_a();
  const ZoneFlow f(p, Zone::kMinus);
  const double c = 0.8;
  const double bm = p.b2 - 1.0;
  const CrossingEvent ev = first_crossing(f, {-1.0, -bm * c}, Line::kMinus, TimeSign::kForward);
  EXPECT_NEAR(ev.point.y, bm * c, 1e-13);
  EXPECT_GT(ev.angle, 0.0);
  EXPECT_LT(ev.angle, kPi);
  EXPECT_FALSE(ev.tangential);
}

TEST(Crossing, CentralFromContactPointHitsPlusLine) {
  const CanonicalParams p = fixtures::family_a();
  const ZoneFlow f(p, Zone::kCentral);
  const CrossingEvent ev = first_crossing(f, {-1.0, 0.0}, Line::kPlus, TimeSign::kForward);
  EXPECT_NEAR(f.at(ev.time, {-1.0, 0.0}).x, 1.0, 1e-12);
  EXPECT_GT(ev.time, 0.0);
  EXPECT_EQ(ev.direction, CrossingDirection::kOutOfZone);
  const Vec2 q = rk4(f.field(), {-1.0, 0.0}, ev.time);
  EXPECT_NEAR(q.x, 1.0, 1e-10);
  EXPECT_NEAR(q.y, ev.point.y, 1e-10);
  // earlier times stay inside the strip
  for (int i = 1; i < 100; ++i) EXPECT_LT(f.at(ev.time * i / 100.0, {-1.0, 0.0}).x, 1.0);
}

TEST(Crossing, BackwardIsNegatedTime) {
  const CanonicalParams p = fixtures::family_b();
  const ZoneFlow f(p, Zone::kPlus);
  const Vec2 q{1.0, -2.0};
  const CrossingEvent fw = first_crossing(f, q, Line::kPlus, TimeSign::kForward);
  const CrossingEvent bw = first_crossing(f, fw.point, Line::kPlus, TimeSign::kBackward);
  EXPECT_NEAR(bw.time, -fw.time, 1e-10);
  EXPECT_NEAR(bw.point.y, q.y, 1e-10);
}

TEST(Crossing, ContactOrbitOfRealFocusSweepsLessThanTwoPi) {
  // b2 < -1 with a repelling focus in R+: the orbit of p+ re-crosses L+
  const CanonicalParams p = fixtures::family_b();
  const ZoneFlow f(p, Zone::kPlus);
  ASSERT_GT(f.spectrum().t, 0.0);
  ASSERT_EQ(f.spectrum().locality, Locality::kReal);
  const CrossingEvent ev = first_crossing(f, {1.0, 0.0}, Line::kPlus, TimeSign::kForward);
  EXPECT_GT(ev.angle, kPi);
  EXPECT_LT(ev.angle, 2.0 * kPi);
}

TEST(Crossing, AttractingFocusNeverReached) {
  const CanonicalParams p = fixtures::family_a();
  const ZoneFlow f(p, Zone::kPlus);
  ASSERT_LT(f.spectrum().t, 0.0);
  const Vec2 e = f.spectrum().equilibrium;
  ASSERT_GT(e.x, 1.0);
  const Vec2 q = e + Vec2{1e-3, 0.0};
  EXPECT_FALSE(reaches(f, q, Line::kPlus, TimeSign::kForward));
  try {
    first_crossing(f, q, Line::kPlus, TimeSign::kForward);
    FAIL() << "expected NoCrossing";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoCrossing);
  }
}

TEST(Crossing, ExitWithoutInteriorEquilibrium) {
  // field points into R+ at (1, -1); the plus focus is virtual for b2 > -1
  const CanonicalParams p = fixtures::family_a(-0.5);
  const ZoneFlow f(p, Zone::kPlus);
  ASSERT_EQ(f.spectrum().locality, Locality::kVirtual);
  EXPECT_TRUE(reaches(f, {1.0, -1.0}, Line::kPlus, TimeSign::kForward));
}

TEST(Crossing, RealEigenvaluesUnsupported) {
  CanonicalParams p = fixtures::family_a();
  p.a1 = 3.0;
  const ZoneFlow f(p, Zone::kCentral);
  try {
    first_crossing(f, {0.0, 0.0}, Line::kPlus, TimeSign::kForward);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupportedZoneType);
  }
  EXPECT_FALSE(reaches(f, {0.0, 0.0}, Line::kPlus, TimeSign::kForward));
}

TEST(Crossing, FirstExitPicksNearerLine) {
  const CanonicalParams p = fixtures::family_a();
  const ZoneFlow f(p, Zone::kCentral);
  const CrossingEvent ev = first_exit(f, {-1.0, 0.0}, TimeSign::kForward);
  EXPECT_EQ(ev.line, Line::kPlus);
  const CrossingEvent back = first_exit(f, {0.0, 0.0}, TimeSign::kBackward);
  EXPECT_LT(back.time, 0.0);
}

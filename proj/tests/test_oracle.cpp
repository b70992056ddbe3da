#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "pwl3/cycles.hpp"
#include "pwl3/error.hpp"
#include "pwl3/flow.hpp"
#include "pwl3/oracle.hpp"

using namespace pwl3;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

// the R- center is real only for b2 > 1 in this family
CanonicalParams real_minus_center() { return fixtures::family_a(2.0, 0.21); }

// a point of R- whose center orbit stays inside R-
Vec2 minus_orbit_start(const CanonicalParams& p) {
  const ZoneSpectrum s = zone_spectrum(p, Zone::kMinus);
  return s.equilibrium + Vec2{0.25 * (-1.0 - s.equilibrium.x), 0.0};
}

}  // namespace

TEST(Oracle, SingleZoneOrbitMatchesClosedForm) {
  const CanonicalParams p = fixtures::family_a();
  const Vec2 p0{3.0, 0.5};
  const OracleTrajectory tr = integrate(p, p0, 0.3, TimeSign::kForward);
  ASSERT_TRUE(tr.events.empty());
  const ZoneFlow flow(p, Zone::kPlus);
  ASSERT_GE(tr.samples.size(), 2u);
  double worst = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double t = 0.3 * i / 100;
    const OracleTrajectory part = integrate(p, p0, t, TimeSign::kForward);
    worst = std::max(worst, norm(part.end - flow.at(t, p0)));
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(Oracle, FlowPointInPlusZoneMatchesClosedForm) {
  const CanonicalParams p = fixtures::family_a();
  const Vec2 p0{1.0, -0.3};
  const OracleTrajectory tr = integrate(p, p0, 0.7, TimeSign::kForward);
  ASSERT_TRUE(tr.events.empty());
  EXPECT_EQ(tr.end_zone, Zone::kPlus);
  EXPECT_LT(norm(tr.end - ZoneFlow(p, Zone::kPlus).at(0.7, p0)), 1e-8);
}

TEST(Oracle, CrossingFromMinusContactPointMatchesClosedForm) {
  const CanonicalParams p = fixtures::family_a();
  const CrossingEvent ev = first_crossing(ZoneFlow(p, Zone::kCentral), {-1.0, 0.0}, Line::kPlus, TimeSign::kForward);
  OracleOptions o;
  o.stop_line = Line::kPlus;
  const OracleTrajectory tr = integrate(p, {-1.0, 0.0}, 100.0, TimeSign::kForward, o);
  ASSERT_TRUE(tr.stopped_on_line);
  ASSERT_EQ(tr.events.size(), 1u);
  EXPECT_NEAR(tr.events[0].point.y, ev.point.y, 1e-8);
  EXPECT_NEAR(tr.events[0].time, ev.time, 1e-8);
}

TEST(Oracle, EventsMatchClosedFormCrossingTimes) {
  const CanonicalParams p = fixtures::family_b();
  const Vec2 p0{0.0, 1.0};
  const OracleTrajectory tr = integrate(p, p0, 20.0, TimeSign::kForward);
  ASSERT_GE(tr.events.size(), 4u);
  // replay the orbit zone by zone with the closed-form flows
  Vec2 q = p0;
  Zone z = Zone::kCentral;
  double t = 0.0;
  for (size_t i = 0; i < 4; ++i) {
    const CrossingEvent e = first_exit(ZoneFlow(p, z), q, TimeSign::kForward);
    t += e.time;
    EXPECT_NEAR(tr.events[i].time, t, 1e-8);
    EXPECT_NEAR(tr.events[i].point.y, e.point.y, 1e-8);
    EXPECT_LT(std::abs(std::abs(tr.events[i].point.x) - 1.0), 1e-10);
    q = e.point;
    const double xdot = build_system(p)(q).x;
    z = e.line == Line::kPlus ? (xdot > 0 ? Zone::kPlus : Zone::kCentral)
                              : (xdot < 0 ? Zone::kMinus : Zone::kCentral);
  }
}

TEST(Oracle, SampleZoneTagsFollowAbscissa) {
  const OracleTrajectory tr = integrate(fixtures::family_a(), {0.0, 1.5}, 15.0, TimeSign::kForward);
  for (const OracleSample& s : tr.samples) {
    if (s.on_boundary) {
      EXPECT_LT(std::abs(std::abs(s.p.x) - 1.0), 1e-9);
      continue;
    }
    EXPECT_EQ(s.zone, zone_of(s.p.x));
  }
}

TEST(Oracle, CenterOrbitReturnsAfterOnePeriod) {
  const CanonicalParams p = real_minus_center();
  const ZoneSpectrum s = zone_spectrum(p, Zone::kMinus);
  ASSERT_TRUE(s.is_center());
  ASSERT_LT(s.equilibrium.x, -1.0);
  const Vec2 p0 = minus_orbit_start(p);
  const OracleTrajectory tr = integrate(p, p0, 2 * std::numbers::pi / s.beta, TimeSign::kForward);
  EXPECT_TRUE(tr.events.empty());
  EXPECT_LT(norm(tr.end - p0), 1e-8);
}

TEST(Oracle, CenterFirstIntegralIsConserved) {
  const CanonicalParams p = real_minus_center();
  const Vec2 p0 = minus_orbit_start(p);
  const double h0 = center_first_integral(p, Zone::kMinus, p0);
  ASSERT_NE(h0, 0.0);
  const OracleTrajectory tr = integrate(p, p0, 30.0, TimeSign::kForward);
  double worst = 0.0;
  for (const OracleSample& s : tr.samples) {
    ASSERT_EQ(s.zone, Zone::kMinus);
    worst = std::max(worst, std::abs(center_first_integral(p, Zone::kMinus, s.p) - h0) / std::abs(h0));
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(Oracle, BackwardUndoesForward) {
  const CanonicalParams p = fixtures::family_b();
  const Vec2 p0{0.3, 0.9};
  const OracleTrajectory f = integrate(p, p0, 12.0, TimeSign::kForward);
  const OracleTrajectory b = integrate(p, f.end, 12.0, TimeSign::kBackward);
  EXPECT_NEAR(f.t_end, 12.0, 1e-12);
  EXPECT_NEAR(b.t_end, -12.0, 1e-12);
  EXPECT_LT(norm(b.end - p0), 1e-7);
}

TEST(Oracle, HalfMapsAgreeOnRandomInputs) {
  for (const CanonicalParams& p : {fixtures::family_a(), fixtures::family_b()}) {
    const VerifyReport r = verify(p, 20261015);
    ASSERT_EQ(r.maps.size(), 5u);
    for (const MapCheck& m : r.maps) {
      EXPECT_EQ(m.samples, 100) << half_map_name(m.map);
      EXPECT_LT(m.max_error, 1e-7) << half_map_name(m.map);
    }
    EXPECT_EQ(r.cycles.size(), 2u);
    EXPECT_TRUE(r.passed());
  }
}

TEST(Oracle, IdentityMinusMapWithCenter) {
  const CanonicalParams p = fixtures::family_a();
  for (double c : {0.05, 0.5, 1.0, 3.0, 12.0}) {
    EXPECT_NEAR(oracle_half_map(p, HalfMap::kPiMinus, {Section::kLMinusO, c}), c, 1e-8);
  }
}

TEST(Oracle, BarOMapVanishesAtBStar) {
  for (const CanonicalParams& p : {fixtures::family_a(), fixtures::family_b()}) {
    const double b = compute_landmarks(p).b_o_star;
    EXPECT_NEAR(oracle_half_map(p, HalfMap::kPiBarO, {Section::kLPlusO, b}), 0.0, 1e-7);
  }
}

TEST(Oracle, ReturnThroughCentralZoneAboveBStarReachesMinusLine) {
  const CanonicalParams p = fixtures::family_a();
  const double b = compute_landmarks(p).b_o_star;
  EXPECT_EQ(code_of([&] { (void)oracle_half_map(p, HalfMap::kPiOReturn, {Section::kLPlusO, b + 1.0}); }),
            ErrorCode::kDomainError);
}

TEST(Oracle, CyclesCloseAfterOnePeriod) {
  for (const CanonicalParams& p : {fixtures::family_a(), fixtures::family_b()}) {
    const CycleSearch r = find_cycles(p);
    for (const LimitCycle& c : r.cycles) EXPECT_LT(oracle_closure(p, c), 1e-6);
  }
}

TEST(Oracle, StalledControllerIsStepUnderflow) {
  OracleOptions o;
  o.control.abs_tol = 1e-300;
  o.control.rel_tol = 1e-300;
  o.control.min_step = 1e-3;
  EXPECT_EQ(code_of([&] { (void)integrate(fixtures::family_a(), {0.0, 1.0}, 1.0, TimeSign::kForward, o); }),
            ErrorCode::kStepUnderflow);
  OracleOptions budget;
  budget.control.max_steps = 10;
  EXPECT_EQ(code_of([&] { (void)integrate(fixtures::family_a(), {0.0, 1.0}, 100.0, TimeSign::kForward, budget); }),
            ErrorCode::kStepUnderflow);
}

TEST(Oracle, RejectsBadSpan) {
  EXPECT_EQ(code_of([] { (void)integrate(fixtures::family_a(), {0.0, 1.0}, -1.0, TimeSign::kForward); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { (void)integrate(fixtures::family_a(), {0.0, 1.0}, NAN, TimeSign::kForward); }),
            ErrorCode::kInvalidArgument);
}

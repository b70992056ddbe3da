#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fixtures.hpp"
#include "pwl3/cycles.hpp"
#include "pwl3/error.hpp"

using namespace pwl3;

namespace {

constexpr double kPi = std::numbers::pi;

// fixed points from scipy solve_ivp (rtol 1e-13) plus brentq on the return maps
constexpr double kFamATwoZone = 27.706088867003707;
constexpr double kFamAThreeZone = 0.88794834206379;
constexpr double kFamBTwoZone = 5.857900026269825;
constexpr double kFamBThreeZone = 0.8688027603627344;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

const LimitCycle* find_kind(const CycleSearch& r, LimitCycle::Kind k) {
  for (const LimitCycle& c : r.cycles) {
    if (c.kind == k) return &c;
  }
  return nullptr;
}

double green_scale(const LimitCycle& c) {
  return std::abs(c.traces[0]) * c.areas.minus + std::abs(c.traces[1]) * c.areas.central +
         std::abs(c.traces[2]) * c.areas.plus + 1e-30;
}

void check_invariants(const CanonicalParams& p, const LimitCycle& c) {
  EXPECT_LT(std::abs(c.residual), 1e-10);
  EXPECT_NEAR(c.multiplier_fd / c.multiplier, 1.0, 1e-5);
  EXPECT_EQ(c.stability, c.multiplier < 1.0 ? Stability::kAttracting : Stability::kRepelling);
  EXPECT_LE(std::abs(c.green_residual), 1e-6 * green_scale(c));
  EXPECT_NEAR(green_check(p, c), c.green_residual, 1e-12 * green_scale(c));
  double period = 0.0;
  for (const OrbitLeg& leg : c.legs) period += leg.flight_time;
  EXPECT_DOUBLE_EQ(period, c.period);
}

}  // namespace

TEST(ReturnMap, CompositionDropsIdentityMinusMap) {
  const ReturnMap m(fixtures::family_a(), ReturnKind::kThreeZone);
  ASSERT_EQ(m.composition().size(), 3u);
  EXPECT_EQ(m.composition()[0], HalfMap::kPiO);
  EXPECT_EQ(m.composition()[1], HalfMap::kPiPlus);
  EXPECT_EQ(m.composition()[2], HalfMap::kPiBarO);
  CanonicalParams p = fixtures::family_a();
  p.a11 += 0.05;
  const ReturnMap m4(p, ReturnKind::kThreeZone);
  ASSERT_EQ(m4.composition().size(), 4u);
  EXPECT_EQ(m4.composition()[0], HalfMap::kPiMinus);
}

TEST(ReturnMap, ThreeZoneDomainStartsAtCStarInConfiguration9b) {
  const ReturnMap m(fixtures::family_b(), ReturnKind::kThreeZone);
  ASSERT_TRUE(m.landmarks().c_star);
  EXPECT_EQ(m.domain_lo(), *m.landmarks().c_star);
  EXPECT_FALSE(m.domain_hi());
  EXPECT_NEAR(m(m.domain_lo()), 0.0, 1e-9);
  EXPECT_NEAR(m.domain_lo(), 0.535405, 1e-6);
}

TEST(ReturnMap, ThreeZoneDomainStartsAtZeroInConfiguration8a) {
  const ReturnMap m(fixtures::family_a(), ReturnKind::kThreeZone);
  EXPECT_EQ(m.domain_lo(), 0.0);
  EXPECT_GT(m(0.0), 0.0);
}

TEST(ReturnMap, TwoZoneDomainIsBoundedByLandmarksIn8a) {
  const ReturnMap m(fixtures::family_a(), ReturnKind::kTwoZonePlus);
  EXPECT_NEAR(m.domain_lo(), 12.3247, 1e-4);
  ASSERT_TRUE(m.domain_hi());
  EXPECT_NEAR(*m.domain_hi(), 35.6496, 1e-4);
  EXPECT_NEAR(m(m.domain_lo()), 0.0, 1e-9);
  EXPECT_NEAR(m(*m.domain_hi()), m.landmarks().a_o_star, 1e-7);
  EXPECT_EQ(m.section(), Section::kLPlusI);
}

TEST(ReturnMap, OutsideDomainIsDomainError) {
  const ReturnMap m(fixtures::family_a(), ReturnKind::kTwoZonePlus);
  EXPECT_EQ(code_of([&] { (void)m(1.0); }), ErrorCode::kDomainError);
  EXPECT_EQ(code_of([&] { (void)m(100.0); }), ErrorCode::kDomainError);
  const ReturnMap t(fixtures::family_b(), ReturnKind::kThreeZone);
  EXPECT_EQ(code_of([&] { (void)displacement(t, 0.1); }), ErrorCode::kDomainError);
}

TEST(ReturnMap, NeedsB2BelowMinusOne) {
  EXPECT_EQ(code_of([] { ReturnMap(fixtures::family_a(-1.0, 0.0), ReturnKind::kThreeZone); }),
            ErrorCode::kUnsupportedRegime);
  EXPECT_EQ(code_of([] { ReturnMap(fixtures::family_a(-0.9, -0.21), ReturnKind::kThreeZone); }),
            ErrorCode::kUnsupportedRegime);
}

TEST(ReturnMap, DisplacementChangesSignAcrossThreeZoneCycle) {
  const ReturnMap m(fixtures::family_a(), ReturnKind::kThreeZone);
  EXPECT_GT(displacement(m, kFamAThreeZone - 0.01), 0.0);
  EXPECT_LT(displacement(m, kFamAThreeZone + 0.01), 0.0);
}

TEST(ReturnMap, AsymptoticSlopeIsExpGammaPlusPi) {
  for (const CanonicalParams& p : {fixtures::family_a(), fixtures::family_b()}) {
    const ReturnMap m(p, ReturnKind::kThreeZone);
    const double h = 1.0;
    const double slope = (m(1e3 + h) - m(1e3 - h)) / (2 * h);
    const double expected = std::exp(zone_spectrum(p, Zone::kPlus).gamma * kPi);
    EXPECT_NEAR(slope / expected, 1.0, 0.01);
  }
}

TEST(FindCycles, FamilyAHasRepellingTwoZoneAndThreeZoneCycle) {
  const CanonicalParams p = fixtures::family_a();
  const CycleSearch r = find_cycles(p);
  EXPECT_EQ(r.configuration, Configuration::k8a);
  EXPECT_FALSE(r.unproven_regime);
  EXPECT_FALSE(CycleSearch::exhaustive);
  ASSERT_EQ(r.cycles.size(), 2u);
  const LimitCycle* two = find_kind(r, LimitCycle::Kind::kTwoZone);
  const LimitCycle* three = find_kind(r, LimitCycle::Kind::kThreeZone);
  ASSERT_TRUE(two && three);
  EXPECT_NEAR(two->fixed_point.value, kFamATwoZone, 1e-9);
  EXPECT_NEAR(three->fixed_point.value, kFamAThreeZone, 1e-9);
  EXPECT_EQ(two->stability, Stability::kRepelling);
  EXPECT_GT(two->multiplier, 1.0);
  check_invariants(p, *two);
  check_invariants(p, *three);
}

TEST(FindCycles, FamilyBHasAttractingTwoZoneCycle) {
  const CanonicalParams p = fixtures::family_b();
  const CycleSearch r = find_cycles(p);
  EXPECT_EQ(r.configuration, Configuration::k9b);
  ASSERT_EQ(r.cycles.size(), 2u);
  const LimitCycle* two = find_kind(r, LimitCycle::Kind::kTwoZone);
  const LimitCycle* three = find_kind(r, LimitCycle::Kind::kThreeZone);
  ASSERT_TRUE(two && three);
  EXPECT_NEAR(two->fixed_point.value, kFamBTwoZone, 1e-9);
  EXPECT_NEAR(three->fixed_point.value, kFamBThreeZone, 1e-9);
  EXPECT_EQ(two->stability, Stability::kAttracting);
  EXPECT_LT(two->multiplier, 1.0);
  check_invariants(p, *two);
  check_invariants(p, *three);
}

TEST(FindCycles, TwoZoneCycleIsConfinedToCentralAndPlusZones) {
  for (const CanonicalParams& p : {fixtures::family_a(), fixtures::family_b()}) {
    const CycleSearch r = find_cycles(p);
    const LimitCycle* two = find_kind(r, LimitCycle::Kind::kTwoZone);
    ASSERT_TRUE(two);
    for (const Vec2& q : two->crossings) EXPECT_EQ(q.x, 1.0);
    EXPECT_EQ(two->areas.minus, 0.0);
    for (const Vec2& q : cycle_polyline(p, *two, 2000)) EXPECT_GT(q.x, -1.0);
    const Landmarks& L = *r.landmarks;
    if (L.plus_repelling) {
      // the L+O crossing lies between b+* and b_o*
      const double b = two->legs[0].end.y / -(p.b2 + 1.0);
      EXPECT_GT(b, *L.b_plus_star);
      EXPECT_LT(b, L.b_o_star);
    } else {
      EXPECT_GT(two->fixed_point.value, L.a_plus_star);
      EXPECT_LT(two->fixed_point.value, *L.a_o_plus);
    }
  }
}

TEST(FindCycles, ThreeZoneCycleCrossesBothLines) {
  const CanonicalParams p = fixtures::family_a();
  const CycleSearch r = find_cycles(p);
  const LimitCycle* three = find_kind(r, LimitCycle::Kind::kThreeZone);
  ASSERT_TRUE(three);
  int minus = 0, plus = 0;
  for (const Vec2& q : three->crossings) (q.x < 0 ? minus : plus)++;
  EXPECT_EQ(minus, 2);
  EXPECT_EQ(plus, 2);
  EXPECT_GT(three->areas.minus, 0.0);
  EXPECT_GT(three->areas.plus, 0.0);
}

TEST(FindCycles, CenterConfigurationReportsAnnulusAndNoCycles) {
  for (const CanonicalParams& p : {fixtures::family_a(-1.0, 0.0), fixtures::family_b(-1.0, 0.0)}) {
    const CycleSearch r = find_cycles(p);
    EXPECT_TRUE(r.cycles.empty());
    EXPECT_EQ(r.configuration, Configuration::kCenter);
    ASSERT_TRUE(r.annulus);
    EXPECT_TRUE(r.annulus->is_center_config);
    EXPECT_EQ(r.annulus->samples, 50);
    EXPECT_EQ(r.annulus->failed_samples, 0);
    EXPECT_LT(r.annulus->displacement_sup, 1e-8);
  }
}

TEST(DetectAnnulus, OffCenterFamilyIsNotACenter) {
  const AnnulusReport r = detect_annulus(fixtures::family_a(-1.0, 0.1));
  EXPECT_FALSE(r.is_center_config);
  EXPECT_GT(r.displacement_sup, 1e-6);
  EXPECT_EQ(code_of([] { (void)find_cycles(fixtures::family_a(-1.0, 0.1)); }), ErrorCode::kUnsupportedRegime);
}

TEST(DetectAnnulus, OuterBoundaryTouchesMinusLineAtItsContactPoint) {
  const AnnulusReport r = detect_annulus(fixtures::family_a(-1.0, 0.0));
  ASSERT_EQ(r.outer_boundary.size(), 3u);
  EXPECT_EQ(r.outer_boundary.front().start, (Vec2{-1.0, 0.0}));
  EXPECT_EQ(r.outer_boundary.back().end, (Vec2{-1.0, 0.0}));
  EXPECT_NEAR(r.outer_boundary[1].end.y, r.outer_ordinate, 1e-10);
  EXPECT_GT(r.outer_ordinate, 0.0);
}

TEST(DetectAnnulus, NeedsB2EqualMinusOne) {
  EXPECT_EQ(code_of([] { (void)detect_annulus(fixtures::family_a()); }), ErrorCode::kUnsupportedRegime);
}

TEST(FindCycles, CentralStripRegimeIsUnsupported) {
  EXPECT_EQ(code_of([] { (void)find_cycles(fixtures::family_a(-0.9, -0.21)); }), ErrorCode::kUnsupportedRegime);
  EXPECT_EQ(code_of([] { (void)find_cycles(fixtures::family_a(0.5, 0.0)); }), ErrorCode::kUnsupportedRegime);
}

TEST(FindCycles, NoSignChangeIsNoBracketWithTable) {
  try {
    (void)find_cycles(fixtures::family_a(-1.09, 0.05));
    FAIL() << "expected NoBracket";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoBracket);
    EXPECT_NE(std::string(e.what()).find("three-zone scan"), std::string::npos);
  }
}

TEST(FindCycles, MirroredProblemGivesRotatedCycles) {
  const CanonicalParams p = fixtures::family_a();
  const CycleSearch a = find_cycles(p);
  const CycleSearch b = find_cycles(mirror(p));
  EXPECT_TRUE(b.mirrored);
  ASSERT_EQ(a.cycles.size(), b.cycles.size());
  for (size_t i = 0; i < a.cycles.size(); ++i) {
    const LimitCycle& ca = a.cycles[i];
    const LimitCycle& cb = b.cycles[i];
    EXPECT_EQ(ca.kind, cb.kind);
    EXPECT_NEAR(ca.period, cb.period, 1e-9);
    EXPECT_NEAR(ca.multiplier, cb.multiplier, 1e-9);
    EXPECT_NEAR(ca.areas.minus, cb.areas.plus, 1e-9);
    EXPECT_NEAR(ca.areas.plus, cb.areas.minus, 1e-9);
    ASSERT_EQ(ca.crossings.size(), cb.crossings.size());
    for (size_t k = 0; k < ca.crossings.size(); ++k) {
      EXPECT_NEAR(ca.crossings[k].x, -cb.crossings[k].x, 1e-12);
      EXPECT_NEAR(ca.crossings[k].y, -cb.crossings[k].y, 1e-9);
    }
  }
  const LimitCycle* two = find_kind(b, LimitCycle::Kind::kTwoZone);
  ASSERT_TRUE(two);
  EXPECT_EQ(two->fixed_point.section, Section::kLMinusI);
  for (const Vec2& q : two->crossings) EXPECT_EQ(q.x, -1.0);
  // the rotated polyline is a periodic orbit of the b2 > 1 system
  check_invariants(mirror(p), *two);
}

TEST(FindCycles, IsDeterministic) {
  const CycleSearch a = find_cycles(fixtures::family_b());
  const CycleSearch b = find_cycles(fixtures::family_b());
  ASSERT_EQ(a.cycles.size(), b.cycles.size());
  for (size_t i = 0; i < a.cycles.size(); ++i) {
    EXPECT_EQ(a.cycles[i].fixed_point.value, b.cycles[i].fixed_point.value);
    EXPECT_EQ(a.cycles[i].green_residual, b.cycles[i].green_residual);
  }
}

TEST(Green, CircleInCentralZoneGivesTraceTimesArea) {
  const double r = 0.5;
  std::vector<Vec2> circle;
  for (int i = 0; i < 20000; ++i) {
    const double t = 2 * kPi * i / 20000;
    circle.push_back({0.2 + r * std::cos(t), r * std::sin(t)});
  }
  const ZoneAreas a = zone_areas(circle);
  EXPECT_EQ(a.minus, 0.0);
  EXPECT_EQ(a.plus, 0.0);
  const std::array<double, 3> traces{0.0, 1.0, -1.4};
  const double res = green_residual(traces, a);
  EXPECT_NEAR(res / (kPi * r * r), 1.0, 1e-6);
  EXPECT_NE(res, 0.0);
}

TEST(Green, ClippingSplitsASquareAcrossZones) {
  const std::vector<Vec2> square{{-2, -1}, {2, -1}, {2, 1}, {-2, 1}};
  const ZoneAreas a = zone_areas(square);
  EXPECT_DOUBLE_EQ(a.minus, 2.0);
  EXPECT_DOUBLE_EQ(a.central, 4.0);
  EXPECT_DOUBLE_EQ(a.plus, 2.0);
}

TEST(Green, PolylineStartsOnSectionAndCloses) {
  const CanonicalParams p = fixtures::family_a();
  const CycleSearch r = find_cycles(p);
  const LimitCycle* three = find_kind(r, LimitCycle::Kind::kThreeZone);
  ASSERT_TRUE(three);
  const std::vector<Vec2> poly = cycle_polyline(p, *three, 4000);
  EXPECT_EQ(poly.front(), three->legs.front().start);
  EXPECT_LT(norm(poly.back() - poly.front()), 0.05);
  EXPECT_GE(poly.size(), 4000u);
}

#include "pwl3/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pwl3/error.hpp"

namespace pwl3 {

std::string_view zone_name(Zone z) noexcept {
  switch (z) {
    case Zone::kMinus: return "minus";
    case Zone::kCentral: return "central";
    case Zone::kPlus: return "plus";
  }
  return "?";
}

Zone zone_of(double x) noexcept {
  if (x < -1.0) return Zone::kMinus;
  if (x > 1.0) return Zone::kPlus;
  return Zone::kCentral;
}

std::string_view locality_name(Locality l) noexcept {
  switch (l) {
    case Locality::kReal: return "real";
    case Locality::kVirtual: return "virtual";
    case Locality::kOnBoundary: return "boundary";
  }
  return "?";
}

std::string_view table1_case_name(Table1Case c) noexcept {
  switch (c) {
    case Table1Case::kB2LessMinus1: return "b2<-1";
    case Table1Case::kB2EqMinus1: return "b2=-1";
    case Table1Case::kAbsB2Less1: return "|b2|<1";
    case Table1Case::kB2Eq1: return "b2=1";
    case Table1Case::kB2Greater1: return "b2>1";
  }
  return "?";
}

PiecewiseSystem build_system(const CanonicalParams& p) {
  PiecewiseSystem sys;
  sys.fields[0] = {{p.a11, -1.0, 1.0 - p.b2 + p.d2, p.a1}, {p.a11, p.d2}};
  sys.fields[1] = {{0.0, -1.0, 1.0, p.a1}, {0.0, p.b2}};
  sys.fields[2] = {{p.c11, -1.0, 1.0 + p.b2 - p.f2, p.a1}, {-p.c11, p.f2}};
  return sys;
}

double continuity_defect(const CanonicalParams& params, std::span<const double> ys) {
  const PiecewiseSystem sys = build_system(params);
  double worst = 0.0;
  for (double y : ys) {
    const Vec2 left{-1.0, y};
    const Vec2 right{1.0, y};
    const Vec2 dm = sys.field(Zone::kMinus)(left) - sys.field(Zone::kCentral)(left);
    const Vec2 dp = sys.field(Zone::kPlus)(right) - sys.field(Zone::kCentral)(right);
    worst = std::max({worst, std::abs(dm.x), std::abs(dm.y), std::abs(dp.x), std::abs(dp.y)});
  }
  return worst;
}

namespace {

// Signed offset of the zone's equilibrium from its own switching line, in the
// direction pointing into the zone. Negative means the equilibrium lies in
// the zone.
Locality locality_from_offset(double offset_outward) {
  if (offset_outward == 0.0) return Locality::kOnBoundary;
  return offset_outward < 0.0 ? Locality::kReal : Locality::kVirtual;
}

}  // namespace

ZoneSpectrum zone_spectrum(const CanonicalParams& p, Zone zone) {
  const PiecewiseSystem sys = build_system(p);
  const Mat2& A = sys.field(zone).A;
  ZoneSpectrum s;
  s.zone = zone;
  s.t = A.trace();
  s.d = A.det();
  s.alpha = s.t / 2.0;
  const double disc = 4.0 * s.d - s.t * s.t;
  s.complex_eigenvalues = disc > 0.0;
  if (s.complex_eigenvalues) {
    s.beta = std::sqrt(disc) / 2.0;
    s.gamma = s.alpha / s.beta;
  }
  if (s.d == 0.0) {
    throw Error(ErrorCode::kDegenerateZone,
                "zone " + std::string(zone_name(zone)) + " has a singular matrix");
  }
  switch (zone) {
    case Zone::kMinus: {
      // x- + 1 = (1 - b2) / d-, y- = a11 (x- + 1)
      const double off = (1.0 - p.b2) / s.d;
      s.equilibrium = {-1.0 + off, p.a11 * off};
      s.locality = locality_from_offset(off);
      break;
    }
    case Zone::kCentral: {
      s.equilibrium = {-p.b2, 0.0};
      const double ab = std::abs(p.b2);
      s.locality = ab < 1.0 ? Locality::kReal : (ab == 1.0 ? Locality::kOnBoundary : Locality::kVirtual);
      break;
    }
    case Zone::kPlus: {
      // x+ - 1 = -(1 + b2) / d+, y+ = c11 (x+ - 1)
      const double off = -(1.0 + p.b2) / s.d;
      s.equilibrium = {1.0 + off, p.c11 * off};
      s.locality = locality_from_offset(-off);
      break;
    }
  }
  return s;
}

ContactData contact_data(const CanonicalParams& p) {
  ContactData c;
  c.pdot_minus = {0.0, p.b2 - 1.0};
  c.pdot_plus = {0.0, p.b2 + 1.0};
  return c;
}

Table1Case table1_case(double b2) noexcept {
  if (b2 < -1.0) return Table1Case::kB2LessMinus1;
  if (b2 == -1.0) return Table1Case::kB2EqMinus1;
  if (b2 < 1.0) return Table1Case::kAbsB2Less1;
  if (b2 == 1.0) return Table1Case::kB2Eq1;
  return Table1Case::kB2Greater1;
}

HypothesisReport check_hypotheses(const CanonicalParams& p) {
  HypothesisReport r;
  r.table1 = table1_case(p.b2);
  const PiecewiseSystem sys = build_system(p);
  auto complex_of = [](const Mat2& A) { return 4.0 * A.det() - A.trace() * A.trace() > 0.0; };
  const Mat2& Am = sys.field(Zone::kMinus).A;
  const Mat2& Ao = sys.field(Zone::kCentral).A;
  const Mat2& Ap = sys.field(Zone::kPlus).A;
  const double to = Ao.trace();
  r.h1 = complex_of(Ao) && to != 0.0;
  if (!r.h1) return r;
  auto center = [&](const Mat2& A) { return complex_of(A) && A.trace() == 0.0; };
  auto opposite_focus = [&](const Mat2& A) {
    return complex_of(A) && A.trace() != 0.0 && (A.trace() > 0.0) != (to > 0.0);
  };
  if (center(Am) && opposite_focus(Ap)) {
    r.h2 = true;
    r.center_zone = Zone::kMinus;
  } else if (center(Ap) && opposite_focus(Am)) {
    r.h2 = true;
    r.center_zone = Zone::kPlus;
  }
  return r;
}

Classification classify_equilibria(const CanonicalParams& p) {
  Classification c;
  for (Zone z : {Zone::kMinus, Zone::kCentral, Zone::kPlus}) {
    ZoneSpectrum s = zone_spectrum(p, z);
    if (!s.complex_eigenvalues) {
      throw Error(ErrorCode::kNonFocusZone,
                  "zone " + std::string(zone_name(z)) + " has real eigenvalues (4d - t^2 <= 0)");
    }
    c.spectra[static_cast<int>(z)] = s;
  }
  c.hypotheses = check_hypotheses(p);
  return c;
}

CanonicalParams mirror(const CanonicalParams& p) noexcept {
  return {.a11 = p.c11, .a1 = p.a1, .b2 = -p.b2, .d2 = -p.f2, .c11 = p.a11, .f2 = -p.d2};
}

}  // namespace pwl3

#include "pwl3/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace pwl3 {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

constexpr double kGrazing = 1e-9;
constexpr double kBoundaryTag = 1e-9;

// Dormand-Prince 5(4) tableau
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Stepper {
  const PiecewiseSystem& sys;
  double sigma;

  Vec2 f(Zone z, Vec2 p) const { return sigma * sys.field(z)(p); }

  // returns the 5th order solution and the embedded error vector
  std::pair<Vec2, Vec2> step(Zone z, Vec2 y, double h) const {
    const Vec2 k1 = f(z, y);
    const Vec2 k2 = f(z, y + h * (a21 * k1));
    const Vec2 k3 = f(z, y + h * (a31 * k1 + a32 * k2));
    const Vec2 k4 = f(z, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vec2 k5 = f(z, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vec2 k6 = f(z, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Vec2 y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vec2 k7 = f(z, y5);
    const Vec2 err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    return {y5, err};
  }
  Vec2 advance(Zone z, Vec2 y, double h) const { return step(z, y, h).first; }
};

bool outside(Zone z, double x) {
  switch (z) {
    case Zone::kMinus: return x > -1.0;
    case Zone::kPlus: return x < 1.0;
    case Zone::kCentral: return x < -1.0 || x > 1.0;
  }
  return false;
}

Line exit_line(Zone z, double x) {
  if (z == Zone::kMinus) return Line::kMinus;
  if (z == Zone::kPlus) return Line::kPlus;
  return x < 0.0 ? Line::kMinus : Line::kPlus;
}

Zone zone_beyond(Line l, double xdot) {
  if (l == Line::kMinus) return xdot < 0.0 ? Zone::kMinus : Zone::kCentral;
  return xdot > 0.0 ? Zone::kPlus : Zone::kCentral;
}

OracleSample tag(double t, Vec2 p) {
  const bool on = std::abs(std::abs(p.x) - 1.0) < kBoundaryTag;
  return {t, p, zone_of(p.x), on};
}

bool wants_stop(const OracleOptions& o, Line l) {
  return o.stop_on_any_line || (o.stop_line && *o.stop_line == l);
}

}  // namespace

OracleTrajectory integrate(const CanonicalParams& params, Vec2 p0, double t_span, TimeSign direction,
                           const OracleOptions& options) {
  if (!std::isfinite(t_span) || t_span < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "integrate: t_span must be finite and >= 0, got " + fmt(t_span));
  }
  if (!std::isfinite(p0.x) || !std::isfinite(p0.y)) {
    throw Error(ErrorCode::kInvalidArgument, "integrate: non-finite start point");
  }
  const PiecewiseSystem sys = build_system(params);
  const Stepper st{sys, sign_of(direction)};
  const StepControl& ctl = options.control;

  OracleTrajectory tr;
  tr.step_controller = ctl;

  // starting zone; on a line the zone is the one the orbit enters
  Zone zone = zone_of(p0.x);
  if (std::abs(p0.x) == 1.0) {
    const Line l = p0.x < 0.0 ? Line::kMinus : Line::kPlus;
    const Vec2 v = st.f(Zone::kCentral, p0);
    double xdot = v.x;
    if (xdot == 0.0) xdot = (sys.field(Zone::kCentral).A * v).x;
    zone = zone_beyond(l, xdot);
  }

  Vec2 p = p0;
  double t = 0.0;  // elapsed |time|
  double h = std::min(ctl.initial_step, ctl.max_step);
  double err_prev = 1.0;
  if (options.record_samples) tr.samples.push_back(tag(0.0, p));

  auto finish = [&]() {
    tr.end = p;
    tr.t_end = st.sigma * t;
    tr.end_zone = zone;
    return tr;
  };

  while (t < t_span) {
    if (tr.accepted_steps + tr.rejected_steps > ctl.max_steps) {
      throw Error(ErrorCode::kStepUnderflow, "integrate: step budget exhausted at t = " + fmt(st.sigma * t) +
                                                 ", p = (" + fmt(p.x) + ", " + fmt(p.y) + ")");
    }
    h = std::min({h, t_span - t, ctl.max_step});
    const auto [y5, e] = st.step(zone, p, h);
    const double sx = ctl.abs_tol + ctl.rel_tol * std::max(std::abs(p.x), std::abs(y5.x));
    const double sy = ctl.abs_tol + ctl.rel_tol * std::max(std::abs(p.y), std::abs(y5.y));
    const double err = std::max(std::abs(e.x) / sx, std::abs(e.y) / sy);
    if (!std::isfinite(err) || err > 1.0) {
      ++tr.rejected_steps;
      h *= std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
      if (h < ctl.min_step && h < t_span - t) {
        throw Error(ErrorCode::kStepUnderflow, "integrate: step size below " + fmt(ctl.min_step) + " at t = " +
                                                   fmt(st.sigma * t) + ", p = (" + fmt(p.x) + ", " + fmt(p.y) + ")");
      }
      continue;
    }
    ++tr.accepted_steps;
    double taken = h;
    Vec2 next = y5;

    if (outside(zone, y5.x)) {
      // bisect the step size so that the end point lands on the line
      const Line l = exit_line(zone, y5.x);
      const double b = line_x(l);
      double lo = 0.0, hi = h;
      Vec2 q = y5;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        q = st.advance(zone, p, mid);
        if (outside(zone, q.x)) {
          hi = mid;
        } else {
          lo = mid;
        }
        if (std::abs(q.x - b) < 1e-15) break;
      }
      taken = 0.5 * (lo + hi);
      q = st.advance(zone, p, taken);
      q.x = b;
      const double xdot = st.f(zone, q).x;
      CrossingEvent ev;
      ev.time = st.sigma * (t + taken);
      ev.point = q;
      ev.line = l;
      ev.direction = CrossingDirection::kOutOfZone;
      const bool grazing = std::abs(xdot) < kGrazing;
      (grazing ? tr.grazing : tr.events).push_back(ev);
      if (grazing) tr.grazing.back().tangential = true;
      next = q;
      zone = zone_beyond(l, xdot);
      if (wants_stop(options, l)) {
        t += taken;
        p = next;
        tr.stopped_on_line = true;
        if (options.record_samples) tr.samples.push_back(tag(st.sigma * t, p));
        return finish();
      }
    } else if (options.stop_on_any_line || options.stop_line) {
      // turning point close to a line without crossing it
      for (Line l : {Line::kMinus, Line::kPlus}) {
        if (!wants_stop(options, l)) continue;
        const double b = line_x(l);
        if (zone == Zone::kMinus && l == Line::kPlus) continue;
        if (zone == Zone::kPlus && l == Line::kMinus) continue;
        if (p.x == b) continue;
        const double toward = b > p.x ? 1.0 : -1.0;
        const double v0 = toward * st.f(zone, p).x;
        const double v1 = toward * st.f(zone, y5).x;
        if (!(v0 > 0.0 && v1 <= 0.0)) continue;
        double lo = 0.0, hi = h;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (mid == lo || mid == hi) break;
          if (toward * st.f(zone, st.advance(zone, p, mid)).x > 0.0) {
            lo = mid;
          } else {
            hi = mid;
          }
        }
        const double tc = 0.5 * (lo + hi);
        const Vec2 q = st.advance(zone, p, tc);
        if (std::abs(q.x - b) < options.contact_tol) {
          CrossingEvent ev;
          ev.time = st.sigma * (t + tc);
          ev.point = q;
          ev.line = l;
          ev.direction = CrossingDirection::kOutOfZone;
          ev.tangential = true;
          tr.grazing.push_back(ev);
          t += tc;
          p = q;
          tr.stopped_on_line = true;
          if (options.record_samples) tr.samples.push_back(tag(st.sigma * t, p));
          return finish();
        }
      }
    }

    t += taken;
    p = next;
    if (options.record_samples) tr.samples.push_back(tag(st.sigma * t, p));
    const double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
    err_prev = std::max(err, 1e-4);
    h = std::max(h * std::clamp(fac, 0.2, 5.0), ctl.min_step);
  }
  return finish();
}

OracleMapResult oracle_ordinate_map(const CanonicalParams& params, HalfMap m, double y_in,
                                    const OracleOptions& options) {
  const Zone z = half_map_zone(m);
  const Vec2 start{section_line_x(input_section(m)), y_in};
  const ZoneSpectrum spec = zone_spectrum(params, z);
  OracleOptions o = options;
  o.record_samples = false;
  o.stop_on_any_line = true;
  o.stop_line.reset();
  const double T = spec.beta > 0.0 ? 4.0 * std::numbers::pi / spec.beta + 1.0 : 1e3;
  const OracleTrajectory tr = integrate(params, start, T, TimeSign::kForward, o);
  if (!tr.stopped_on_line) {
    throw Error(ErrorCode::kNoCrossing, std::string(half_map_name(m)) + ": oracle orbit from y = " + fmt(y_in) +
                                            " reaches no switching line within t = " + fmt(T));
  }
  const Line target = section_line_x(output_section(m)) < 0.0 ? Line::kMinus : Line::kPlus;
  const bool contact = tr.events.empty();
  const CrossingEvent& ev = contact ? tr.grazing.back() : tr.events.back();
  if (ev.line != target) {
    throw Error(ErrorCode::kDomainError, std::string(half_map_name(m)) + ": oracle orbit from y = " + fmt(y_in) +
                                             " reaches the other switching line");
  }
  return {ev.point.y, ev.time, contact};
}

double oracle_half_map(const CanonicalParams& params, HalfMap m, SectionCoord input, const OracleOptions& options) {
  const double si = section_scale(input_section(m), params.b2);
  const double so = section_scale(output_section(m), params.b2);
  if (si == 0.0 || so == 0.0) {
    throw Error(ErrorCode::kDomainError, std::string(half_map_name(m)) + ": degenerate section at b2 = " +
                                             fmt(params.b2));
  }
  if (input.section != input_section(m)) {
    throw Error(ErrorCode::kInvalidArgument, std::string(half_map_name(m)) + ": input must lie on " +
                                                 std::string(section_name(input_section(m))));
  }
  return oracle_ordinate_map(params, m, input.value * si, options).y_out / so;
}

double oracle_closure(const CanonicalParams& params, const LimitCycle& cycle, const OracleOptions& options) {
  if (cycle.legs.empty()) throw Error(ErrorCode::kInvalidArgument, "oracle_closure: cycle has no legs");
  OracleOptions o = options;
  o.record_samples = false;
  o.stop_line.reset();
  o.stop_on_any_line = false;
  const Vec2 start = cycle.legs.front().start;
  const OracleTrajectory tr = integrate(params, start, cycle.period, TimeSign::kForward, o);
  return norm(tr.end - start);
}

bool VerifyReport::passed() const {
  for (const MapCheck& m : maps) {
    if (!m.passed) return false;
  }
  for (const CycleCheck& c : cycles) {
    if (!c.passed) return false;
  }
  return true;
}

VerifyReport verify(const CanonicalParams& params, std::uint64_t seed, int samples, double map_tol,
                    double cycle_tol) {
  VerifyReport rep;
  rep.map_tol = map_tol;
  rep.cycle_tol = cycle_tol;
  const HalfMaps hm(params);
  const Landmarks L = compute_landmarks(params);
  std::mt19937_64 rng(seed);
  for (int k = 0; k < kHalfMapCount; ++k) {
    const HalfMap m = static_cast<HalfMap>(k);
    if (!hm.available(m)) continue;
    MapCheck c;
    c.map = m;
    switch (m) {
      case HalfMap::kPiMinus:
      case HalfMap::kPiO:
        c.lo = 0.1;
        c.hi = 10.0;
        break;
      case HalfMap::kPiPlus:
        c.lo = (L.plus_repelling ? 0.0 : L.a_plus_star) + 0.1;
        c.hi = c.lo + 10.0;
        break;
      case HalfMap::kPiBarO:
        c.lo = L.b_o_star + 0.1;
        c.hi = L.b_o_star + 10.0;
        break;
      case HalfMap::kPiOReturn:
        c.lo = 0.05 * L.b_o_star;
        c.hi = 0.95 * L.b_o_star;
        break;
    }
    std::uniform_real_distribution<double> u(c.lo, c.hi);
    for (int i = 0; i < samples; ++i) {
      const double v = u(rng);
      try {
        const double a = hm.eval(m, v).output.value;
        const double o = oracle_half_map(params, m, {input_section(m), v});
        const double e = std::abs(a - o);
        if (e > c.max_error || std::isnan(e)) {
          c.max_error = e;
          c.worst_input = v;
        }
        ++c.samples;
      } catch (const Error&) {
        ++c.skipped;
      }
    }
    c.passed = c.skipped == 0 && c.samples == samples && c.max_error < map_tol;
    rep.maps.push_back(c);
  }
  try {
    const CycleSearch search = find_cycles(params);
    for (const LimitCycle& cy : search.cycles) {
      CycleCheck cc;
      cc.kind = cy.kind;
      cc.fixed_point = cy.fixed_point.value;
      cc.closure = oracle_closure(params, cy);
      cc.passed = cc.closure < cycle_tol;
      rep.cycles.push_back(cc);
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoBracket) throw;
  }
  return rep;
}

double center_first_integral(const CanonicalParams& params, Zone zone, Vec2 p) {
  const ZoneSpectrum s = zone_spectrum(params, zone);
  const Mat2 A = build_system(params).field(zone).A;
  const Vec2 w = p - s.equilibrium;
  return A.c * w.x * w.x - 2.0 * A.a * w.x * w.y - A.b * w.y * w.y;
}

}  // namespace pwl3

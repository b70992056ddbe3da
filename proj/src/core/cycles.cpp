#include "pwl3/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pwl3/flow.hpp"
#include "pwl3/roots.hpp"

namespace pwl3 {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

Zone swap_zone(Zone z) {
  if (z == Zone::kMinus) return Zone::kPlus;
  if (z == Zone::kPlus) return Zone::kMinus;
  return z;
}

Section swap_section(Section s) {
  switch (s) {
    case Section::kLMinusO: return Section::kLPlusO;
    case Section::kLMinusI: return Section::kLPlusI;
    case Section::kLPlusI: return Section::kLMinusI;
    case Section::kLPlusO: return Section::kLMinusO;
  }
  return s;
}

std::array<double, 3> traces_of(const CanonicalParams& p) {
  return {zone_spectrum(p, Zone::kMinus).t, zone_spectrum(p, Zone::kCentral).t,
          zone_spectrum(p, Zone::kPlus).t};
}

// Keeps the part of the polygon with sign * x <= bound.
std::vector<Vec2> clip(const std::vector<Vec2>& poly, double sign, double bound) {
  std::vector<Vec2> out;
  if (poly.empty()) return out;
  out.reserve(poly.size() + 4);
  auto inside = [&](Vec2 p) { return sign * p.x <= bound; };
  Vec2 prev = poly.back();
  bool prev_in = inside(prev);
  for (Vec2 cur : poly) {
    const bool cur_in = inside(cur);
    if (cur_in != prev_in) {
      const double xb = sign * bound;
      const double t = (xb - prev.x) / (cur.x - prev.x);
      out.push_back({xb, prev.y + t * (cur.y - prev.y)});
    }
    if (cur_in) out.push_back(cur);
    prev = cur;
    prev_in = cur_in;
  }
  return out;
}

double shoelace(const std::vector<Vec2>& poly) {
  const size_t n = poly.size();
  if (n < 3) return 0.0;
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % n];
    s += a.x * b.y - b.x * a.y;
  }
  return 0.5 * std::abs(s);
}

ZoneAreas richardson_areas(const CanonicalParams& params, const LimitCycle& c) {
  const ZoneAreas a1 = zone_areas(cycle_polyline(params, c, 10000));
  const ZoneAreas a2 = zone_areas(cycle_polyline(params, c, 20000));
  auto r = [](double x1, double x2) { return (4.0 * x2 - x1) / 3.0; };
  return {r(a1.minus, a2.minus), r(a1.central, a2.central), r(a1.plus, a2.plus)};
}

}  // namespace

std::string_view return_kind_name(ReturnKind k) noexcept {
  return k == ReturnKind::kThreeZone ? "three_zone" : "two_zone_plus";
}

std::string_view stability_name(Stability s) noexcept {
  switch (s) {
    case Stability::kAttracting: return "attracting";
    case Stability::kRepelling: return "repelling";
    case Stability::kNeutral: return "neutral";
  }
  return "?";
}

Stability stability_of(double multiplier) noexcept {
  if (multiplier < 1.0) return Stability::kAttracting;
  if (multiplier > 1.0) return Stability::kRepelling;
  return Stability::kNeutral;
}

std::string_view cycle_kind_name(LimitCycle::Kind k) noexcept {
  return k == LimitCycle::Kind::kTwoZone ? "two_zone" : "three_zone";
}

std::string_view configuration_name(Configuration c) noexcept {
  switch (c) {
    case Configuration::k8a: return "8a";
    case Configuration::k8b: return "8b";
    case Configuration::k9a: return "9a";
    case Configuration::k9b: return "9b";
    case Configuration::kUndetermined: return "undetermined";
    case Configuration::kCenter: return "center";
  }
  return "?";
}

Configuration configuration_of(const Landmarks& L) {
  if (!L.a_o_plus) return Configuration::kUndetermined;
  const double diff = L.a_o_star - *L.a_o_plus;
  if (diff == 0.0) return Configuration::kUndetermined;
  if (!L.plus_repelling) return diff > 0.0 ? Configuration::k8a : Configuration::k8b;
  return diff < 0.0 ? Configuration::k9b : Configuration::k9a;
}

// ---------------------------------------------------------------- ReturnMap

ReturnMap::ReturnMap(const CanonicalParams& params, ReturnKind kind) : maps_(params), kind_(kind) {
  if (!(params.b2 < -1.0)) {
    throw Error(ErrorCode::kUnsupportedRegime, "return maps need b2 < -1, got b2 = " + fmt(params.b2));
  }
  landmarks_ = compute_landmarks(params);
  if (kind == ReturnKind::kThreeZone) {
    if (zone_spectrum(params, Zone::kMinus).t != 0.0) composition_.push_back(HalfMap::kPiMinus);
    composition_.insert(composition_.end(), {HalfMap::kPiO, HalfMap::kPiPlus, HalfMap::kPiBarO});
    lo_ = landmarks_.c_star.value_or(0.0);
  } else {
    if (!landmarks_.a_o_plus) {
      throw Error(ErrorCode::kUnsupportedRegime,
                  "two-zone return needs b_o* >= b+* (b_o* = " + fmt(landmarks_.b_o_star) +
                      ", b+* = " + fmt(landmarks_.b_plus_star.value_or(0.0)) + ")");
    }
    maps_.require(HalfMap::kPiOReturn);
    composition_ = {HalfMap::kPiPlus, HalfMap::kPiOReturn};
    lo_ = landmarks_.plus_repelling ? 0.0 : landmarks_.a_plus_star;
    hi_ = *landmarks_.a_o_plus;
  }
}

Section ReturnMap::section() const {
  return kind_ == ReturnKind::kThreeZone ? Section::kLMinusO : Section::kLPlusI;
}

bool ReturnMap::contains(double v) const {
  if (!std::isfinite(v)) return false;
  if (v < lo_) return false;
  return !hi_ || v <= *hi_;
}

ReturnEval ReturnMap::eval(double v) const {
  if (!contains(v)) {
    throw Error(ErrorCode::kDomainError,
                std::string(return_kind_name(kind_)) + " return map: " + fmt(v) + " outside [" + fmt(lo_) +
                    ", " + (hi_ ? fmt(*hi_) : std::string("inf")) + "]");
  }
  std::vector<HalfMap> chain = composition_;
  if (kind_ == ReturnKind::kThreeZone && chain.front() != HalfMap::kPiMinus) {
    chain.insert(chain.begin(), HalfMap::kPiMinus);
  }
  const double scale = section_scale(section(), maps_.params().b2);
  ReturnEval r;
  r.input = v;
  r.derivative = 1.0;
  double y = v * scale;
  for (HalfMap m : chain) {
    const OrdinateEval o = maps_.eval_ordinate(m, y);
    OrbitLeg leg;
    leg.zone = half_map_zone(m);
    leg.map = m;
    leg.start = {section_line_x(input_section(m)), y};
    leg.end = {section_line_x(output_section(m)), o.y_out};
    leg.flight_time = o.flight_time;
    leg.angle = o.angle;
    r.legs.push_back(leg);
    r.derivative *= o.dy_out_dy_in;
    r.derivative_is_limit = r.derivative_is_limit || o.derivative_is_limit;
    r.period += o.flight_time;
    y = o.y_out;
  }
  r.output = y / scale;
  return r;
}

double displacement(const ReturnMap& map, double v) { return map(v) - v; }

// ---------------------------------------------------------------- areas

ZoneAreas zone_areas(std::span<const Vec2> closed_polyline) {
  const std::vector<Vec2> poly(closed_polyline.begin(), closed_polyline.end());
  ZoneAreas a;
  a.minus = shoelace(clip(poly, 1.0, -1.0));
  a.central = shoelace(clip(clip(poly, 1.0, 1.0), -1.0, 1.0));
  a.plus = shoelace(clip(poly, -1.0, -1.0));
  return a;
}

double green_residual(const std::array<double, 3>& t, const ZoneAreas& a) {
  return t[0] * a.minus + t[1] * a.central + t[2] * a.plus;
}

std::vector<Vec2> cycle_polyline(const CanonicalParams& params, const LimitCycle& cycle, int n) {
  double total = 0.0;
  for (const OrbitLeg& leg : cycle.legs) total += leg.angle;
  std::vector<Vec2> out;
  out.reserve(static_cast<size_t>(n) + 16 * cycle.legs.size());
  for (const OrbitLeg& leg : cycle.legs) {
    const ZoneFlow flow(params, leg.zone);
    const int m = std::max(8, static_cast<int>(std::lround(n * (total > 0.0 ? leg.angle / total : 0.0))));
    out.push_back(leg.start);
    for (int j = 1; j < m; ++j) {
      const double s = 0.5 * leg.flight_time * (1.0 - std::cos(std::numbers::pi * j / m));
      out.push_back(flow.at(s, leg.start));
    }
  }
  return out;
}

double green_check(const CanonicalParams& params, const LimitCycle& cycle) {
  return green_residual(cycle.traces, richardson_areas(params, cycle));
}

// ---------------------------------------------------------------- annulus

AnnulusReport detect_annulus(const CanonicalParams& params, int samples) {
  if (params.b2 != -1.0) {
    throw Error(ErrorCode::kUnsupportedRegime, "annulus detection needs b2 = -1, got b2 = " + fmt(params.b2));
  }
  const ZoneSpectrum sc = zone_spectrum(params, Zone::kCentral);
  const ZoneSpectrum sp = zone_spectrum(params, Zone::kPlus);
  AnnulusReport rep;
  const double gsum = sc.gamma + sp.gamma;
  rep.is_center_config = sc.complex_eigenvalues && sp.complex_eigenvalues &&
                         std::abs(gsum) <= 1e-12 * std::max(1.0, std::abs(sc.gamma));

  const ZoneFlow central(params, Zone::kCentral);
  const ZoneFlow plus(params, Zone::kPlus);
  const Vec2 p_minus{-1.0, 0.0};
  const CrossingEvent fwd = first_crossing(central, p_minus, Line::kPlus, TimeSign::kForward);
  const CrossingEvent turn = first_crossing(plus, fwd.point, Line::kPlus, TimeSign::kForward);
  const CrossingEvent back = first_crossing(central, p_minus, Line::kPlus, TimeSign::kBackward);
  rep.outer_ordinate = back.point.y;
  rep.outer_boundary = {
      {Zone::kCentral, HalfMap::kPiO, p_minus, fwd.point, fwd.time, fwd.angle},
      {Zone::kPlus, HalfMap::kPiPlus, fwd.point, turn.point, turn.time, turn.angle},
      {Zone::kCentral, HalfMap::kPiOReturn, back.point, p_minus, -back.time, back.angle},
  };

  rep.samples = samples;
  for (int k = 1; k <= samples; ++k) {
    const double y = rep.outer_ordinate * k / (samples + 1);
    try {
      const CrossingEvent e1 = first_exit(central, {1.0, y}, TimeSign::kForward);
      if (e1.line != Line::kPlus) {
        ++rep.failed_samples;
        continue;
      }
      const CrossingEvent e2 = first_crossing(plus, e1.point, Line::kPlus, TimeSign::kForward);
      rep.displacement_sup = std::max(rep.displacement_sup, std::abs(e2.point.y - y));
    } catch (const Error&) {
      ++rep.failed_samples;
    }
  }
  return rep;
}

// ---------------------------------------------------------------- search

namespace {

std::vector<ScanSample> scan(const ReturnMap& map, const std::vector<double>& grid) {
  std::vector<ScanSample> out;
  out.reserve(grid.size());
  for (double v : grid) {
    ScanSample s;
    s.v = v;
    try {
      s.displacement = displacement(map, v);
      s.ok = std::isfinite(s.displacement);
    } catch (const Error&) {
      s.ok = false;
    }
    out.push_back(s);
  }
  return out;
}

double multiplier_fd(const ReturnMap& map, double v) {
  double h = 1e-5 * std::max(1.0, std::abs(v));
  h = std::min(h, 0.5 * (v - map.domain_lo()));
  if (map.domain_hi()) h = std::min(h, 0.5 * (*map.domain_hi() - v));
  if (!(h > 0.0)) return std::nan("");
  return (map(v + h) - map(v - h)) / (2.0 * h);
}

LimitCycle make_cycle(const CanonicalParams& params, const ReturnMap& map, double v, double root_tol) {
  const ReturnEval e = map.eval(v);
  LimitCycle c;
  c.kind = map.kind() == ReturnKind::kThreeZone ? LimitCycle::Kind::kThreeZone : LimitCycle::Kind::kTwoZone;
  c.fixed_point = {map.section(), v};
  c.residual = e.output - v;
  if (!(std::abs(c.residual) < root_tol)) {
    throw Error(ErrorCode::kConvergenceError,
                "fixed point " + fmt(v) + " has residual " + fmt(c.residual) + " above " + fmt(root_tol));
  }
  c.period = e.period;
  c.multiplier = e.derivative;
  c.multiplier_fd = multiplier_fd(map, v);
  c.stability = stability_of(c.multiplier);
  c.legs = e.legs;
  for (const OrbitLeg& leg : e.legs) c.crossings.push_back(leg.start);
  c.traces = traces_of(params);
  c.areas = richardson_areas(params, c);
  c.green_residual = green_residual(c.traces, c.areas);
  return c;
}

void collect_roots(const CanonicalParams& params, const ReturnMap& map, const std::vector<ScanSample>& table,
                   double root_tol, std::vector<LimitCycle>& out) {
  auto fdf = [&](double v) {
    const ReturnEval e = map.eval(v);
    return std::pair<double, double>{e.output - v, e.derivative - 1.0};
  };
  RootOptions opt;
  opt.ftol = 0.01 * root_tol;
  for (size_t i = 0; i < table.size(); ++i) {
    const ScanSample& s = table[i];
    if (!s.ok) continue;
    if (s.displacement == 0.0) {
      out.push_back(make_cycle(params, map, s.v, root_tol));
      continue;
    }
    if (i + 1 >= table.size()) break;
    const ScanSample& t = table[i + 1];
    if (!t.ok || t.displacement == 0.0) continue;
    if ((s.displacement > 0.0) == (t.displacement > 0.0)) continue;
    const Root r = solve_bracketed(fdf, s.v, t.v, opt);
    out.push_back(make_cycle(params, map, r.x, root_tol));
  }
}

std::string table_summary(const std::vector<ScanSample>& table) {
  std::ostringstream os;
  os.precision(6);
  int ok = 0;
  for (const ScanSample& s : table) ok += s.ok ? 1 : 0;
  os << ok << "/" << table.size() << " samples evaluated";
  if (!table.empty()) {
    const size_t idx[] = {0, table.size() / 4, table.size() / 2, 3 * table.size() / 4, table.size() - 1};
    os << "; (v, Pi(v)-v):";
    for (size_t i : idx) {
      os << " (" << table[i].v << ", ";
      if (table[i].ok) {
        os << table[i].displacement;
      } else {
        os << "n/a";
      }
      os << ")";
    }
  }
  return os.str();
}

CycleSearch search_below(const CanonicalParams& params, const ScanOptions& opt) {
  CycleSearch res;
  const ReturnMap three(params, ReturnKind::kThreeZone);
  res.landmarks = three.landmarks();
  res.configuration = configuration_of(*res.landmarks);
  res.unproven_regime = res.configuration != Configuration::k8a && res.configuration != Configuration::k9b;
  res.infinity_slope = std::exp(zone_spectrum(params, Zone::kPlus).gamma * std::numbers::pi);

  if (res.landmarks->a_o_plus) {
    const ReturnMap two(params, ReturnKind::kTwoZonePlus);
    const double lo = two.domain_lo();
    const double hi = *two.domain_hi();
    std::vector<double> grid(static_cast<size_t>(opt.two_zone_samples) + 1);
    for (int i = 0; i <= opt.two_zone_samples; ++i) grid[i] = lo + (hi - lo) * i / opt.two_zone_samples;
    grid.back() = hi;
    res.two_zone_scan = scan(two, grid);
    collect_roots(params, two, res.two_zone_scan, opt.root_tol, res.cycles);
  }

  const double lo = three.domain_lo();
  std::vector<double> grid;
  grid.reserve(static_cast<size_t>(opt.three_zone_samples) + 1);
  grid.push_back(lo);
  const double span = opt.three_zone_max - lo;
  if (span > opt.three_zone_min_offset) {
    const double ratio = std::log(span / opt.three_zone_min_offset);
    for (int i = 0; i < opt.three_zone_samples; ++i) {
      const double f = opt.three_zone_samples > 1 ? static_cast<double>(i) / (opt.three_zone_samples - 1) : 1.0;
      grid.push_back(lo + opt.three_zone_min_offset * std::exp(ratio * f));
    }
  }
  res.three_zone_scan = scan(three, grid);
  collect_roots(params, three, res.three_zone_scan, opt.root_tol, res.cycles);

  if (res.cycles.empty()) {
    throw Error(ErrorCode::kNoBracket, "no sign change of the displacement; two-zone scan: " +
                                           table_summary(res.two_zone_scan) +
                                           "; three-zone scan: " + table_summary(res.three_zone_scan));
  }
  return res;
}

void rotate(CycleSearch& res) {
  res.mirrored = true;
  for (LimitCycle& c : res.cycles) {
    c.mirrored = true;
    c.fixed_point.section = swap_section(c.fixed_point.section);
    for (Vec2& p : c.crossings) p = -p;
    for (OrbitLeg& leg : c.legs) {
      leg.zone = swap_zone(leg.zone);
      leg.start = -leg.start;
      leg.end = -leg.end;
    }
    std::swap(c.traces[0], c.traces[2]);
    std::swap(c.areas.minus, c.areas.plus);
  }
  if (res.annulus) {
    res.annulus->inner_boundary = -res.annulus->inner_boundary;
    for (OrbitLeg& leg : res.annulus->outer_boundary) {
      leg.zone = swap_zone(leg.zone);
      leg.start = -leg.start;
      leg.end = -leg.end;
    }
  }
}

CycleSearch search_canonical(const CanonicalParams& params, const ScanOptions& opt) {
  if (params.b2 < -1.0) return search_below(params, opt);
  CycleSearch res;
  res.annulus = detect_annulus(params);
  if (!res.annulus->is_center_config) {
    throw Error(ErrorCode::kUnsupportedRegime,
                "b2 = -1 without gamma_o + gamma_+ = 0: no isolated-cycle search in this regime");
  }
  res.configuration = Configuration::kCenter;
  res.infinity_slope = std::exp(zone_spectrum(params, Zone::kPlus).gamma * std::numbers::pi);
  return res;
}

}  // namespace

CycleSearch find_cycles(const CanonicalParams& params, const ScanOptions& options) {
  if (std::abs(params.b2) < 1.0 || !std::isfinite(params.b2)) {
    throw Error(ErrorCode::kUnsupportedRegime,
                "cycle search needs |b2| >= 1 (b2 <= -1 or its mirror b2 >= 1), got b2 = " + fmt(params.b2));
  }
  if (params.b2 <= -1.0) return search_canonical(params, options);
  CycleSearch res = search_canonical(mirror(params), options);
  rotate(res);
  return res;
}

}  // namespace pwl3

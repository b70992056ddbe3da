#include "pwl3/halfmaps.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "pwl3/roots.hpp"

namespace pwl3 {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTiny = 1e-150;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string_view section_name(Section s) noexcept {
  switch (s) {
    case Section::kLMinusO: return "LMinusO";
    case Section::kLMinusI: return "LMinusI";
    case Section::kLPlusI: return "LPlusI";
    case Section::kLPlusO: return "LPlusO";
  }
  return "?";
}

double section_scale(Section s, double b2) noexcept {
  switch (s) {
    case Section::kLMinusO: return 1.0 - b2;
    case Section::kLMinusI: return b2 - 1.0;
    case Section::kLPlusI: return b2 + 1.0;
    case Section::kLPlusO: return -(b2 + 1.0);
  }
  return 0.0;
}

double section_line_x(Section s) noexcept {
  return (s == Section::kLMinusO || s == Section::kLMinusI) ? -1.0 : 1.0;
}

std::string_view half_map_name(HalfMap m) noexcept {
  switch (m) {
    case HalfMap::kPiMinus: return "pi_minus";
    case HalfMap::kPiO: return "pi_o";
    case HalfMap::kPiPlus: return "pi_plus";
    case HalfMap::kPiBarO: return "pi_bar_o";
    case HalfMap::kPiOReturn: return "pi_o_return";
  }
  return "?";
}

HalfMap parse_half_map(std::string_view name) {
  for (int i = 0; i < kHalfMapCount; ++i) {
    const auto m = static_cast<HalfMap>(i);
    if (half_map_name(m) == name) return m;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown half-map '" + std::string(name) + "'");
}

Section input_section(HalfMap m) noexcept {
  switch (m) {
    case HalfMap::kPiMinus: return Section::kLMinusO;
    case HalfMap::kPiO: return Section::kLMinusI;
    case HalfMap::kPiPlus: return Section::kLPlusI;
    case HalfMap::kPiBarO: return Section::kLPlusO;
    case HalfMap::kPiOReturn: return Section::kLPlusO;
  }
  return Section::kLMinusO;
}

Section output_section(HalfMap m) noexcept {
  switch (m) {
    case HalfMap::kPiMinus: return Section::kLMinusI;
    case HalfMap::kPiO: return Section::kLPlusI;
    case HalfMap::kPiPlus: return Section::kLPlusO;
    case HalfMap::kPiBarO: return Section::kLMinusO;
    case HalfMap::kPiOReturn: return Section::kLPlusI;
  }
  return Section::kLMinusO;
}

Zone half_map_zone(HalfMap m) noexcept {
  switch (m) {
    case HalfMap::kPiMinus: return Zone::kMinus;
    case HalfMap::kPiPlus: return Zone::kPlus;
    default: return Zone::kCentral;
  }
}

// Transition from x = k_s to x = k_e through one focus zone. With
// mu = k + b2, z = alpha + i beta and D = det A, the start and end ordinates
// after angle tau are
//   y_s = beta e^{-gamma tau} (mu_s - mu_e - mu_s phi(tau, gamma)) / (D sin tau)
//   y_e = beta e^{ gamma tau} (mu_s - mu_e + mu_e phi(tau, -gamma)) / (D sin tau)
// The angle is stored as base + delta with base in {0, pi}.
struct HalfMaps::Window {
  struct Piece {
    double base = 0.0;
    double dlo = 0.0;
    double dhi = 0.0;
    bool singular_hi = false;  // y_s, y_e unbounded at dhi (else at dlo)
  };
  struct Point {
    double ys, ye, dys, dye;
  };

  HalfMap map = HalfMap::kPiMinus;
  double beta = 0.0, gamma = 0.0, det = 0.0;
  double mu_s = 0.0, mu_e = 0.0;
  bool identity = false;   // center return y_e = -y_s
  bool half_turn = false;  // mu_s = mu_e = 0: tau = pi, y_e = -e^{gamma pi} y_s
  std::vector<Piece> pieces;  // ordered by increasing distance from the regular end
  double tau_lo = 0.0, tau_hi = 0.0;
  double reg_tau = 0.0;  // regular end of the window
  double reg_ys = 0.0, reg_ye = 0.0;
  double sign_ys = 0.0, sign_ye = 0.0;

  Point at(double base, double delta) const {
    const double tau = base + delta;
    double s = 0.0, fp = 0.0, fm = 0.0;
    if (base == 0.0) {
      s = std::sin(delta);
      fp = phi(delta, gamma);
      fm = phi(delta, -gamma);
    } else {
      s = -std::sin(delta);
      fp = phi_pi_offset(delta, gamma);
      fm = phi_pi_offset(delta, -gamma);
    }
    const double em = std::exp(-gamma * tau), ep = std::exp(gamma * tau);
    Point p{};
    p.ys = beta * em * (mu_s - mu_e - mu_s * fp) / (det * s);
    p.ye = beta * ep * (mu_s - mu_e + mu_e * fm) / (det * s);
    p.dys = -em * p.ye / s;
    p.dye = -ep * p.ys / s;
    return p;
  }
};

namespace {

// Root of phi(base + delta, y) = level for delta in (lo, hi), phi monotone there.
double phi_level(double base, double y, double level, double lo, double hi) {
  auto f = [&](double d) {
    const double v = base == 0.0 ? phi(d, y) : phi_pi_offset(d, y);
    const double slope = (1.0 + y * y) * std::exp((base + d) * y) * (base == 0.0 ? std::sin(d) : -std::sin(d));
    return std::pair<double, double>{v - level, slope};
  };
  return solve_bracketed(f, lo, hi).x;
}

}  // namespace

HalfMaps::HalfMaps(const CanonicalParams& params) : params_(params), parametric_(params.b2 <= -1.0) {
  const double b2 = params.b2;
  for (int i = 0; i < kHalfMapCount; ++i) {
    const auto m = static_cast<HalfMap>(i);
    const Zone zone = half_map_zone(m);
    ZoneSpectrum sp;
    try {
      sp = zone_spectrum(params, zone);
    } catch (const Error& e) {
      failures_[i] = Failure{e.code(), e.what()};
      continue;
    }
    if (!sp.complex_eigenvalues) {
      failures_[i] = Failure{ErrorCode::kUnsupportedZoneType,
                             std::string(half_map_name(m)) + ": zone " + std::string(zone_name(zone)) +
                                 " has real eigenvalues"};
      continue;
    }
    if (m == HalfMap::kPiMinus && sp.t < 0.0) {
      failures_[i] = Failure{ErrorCode::kUnsupportedZoneType, "pi_minus requires t- >= 0, got " + fmt(sp.t)};
      continue;
    }
    if (!parametric_) continue;

    auto w = std::make_shared<Window>();
    w->map = m;
    w->beta = sp.beta;
    w->gamma = sp.gamma;
    w->det = sp.d;
    const double g = sp.gamma;
    const double kappa = (1.0 + b2) / (b2 - 1.0);
    switch (m) {
      case HalfMap::kPiMinus:
      case HalfMap::kPiOReturn: {
        const double mu = m == HalfMap::kPiMinus ? b2 - 1.0 : b2 + 1.0;
        w->mu_s = w->mu_e = mu;
        w->identity = m == HalfMap::kPiMinus && sp.t == 0.0;
        w->half_turn = mu == 0.0;
        w->tau_lo = 0.0;
        w->tau_hi = kPi;
        w->pieces = {{0.0, 0.0, kPi / 2.0, true}, {kPi, -kPi / 2.0, 0.0, true}};
        w->reg_tau = 0.0;
        break;
      }
      case HalfMap::kPiO: {
        w->mu_s = b2 - 1.0;
        w->mu_e = b2 + 1.0;
        const double t0 = phi_level(0.0, g, 1.0 - kappa, 0.0, kPi);
        w->tau_lo = 0.0;
        w->tau_hi = t0;
        w->pieces = {{0.0, 0.0, t0, false}};
        w->reg_tau = t0;
        break;
      }
      case HalfMap::kPiBarO: {
        w->mu_s = b2 + 1.0;
        w->mu_e = b2 - 1.0;
        const double t0 = phi_level(0.0, -g, 1.0 - kappa, 0.0, kPi);
        w->tau_lo = 0.0;
        w->tau_hi = t0;
        w->pieces = {{0.0, 0.0, t0, false}};
        w->reg_tau = t0;
        break;
      }
      case HalfMap::kPiPlus: {
        const double mu = b2 + 1.0;
        w->mu_s = w->mu_e = mu;
        w->half_turn = mu == 0.0;
        double dend = kPi;
        if (g > 0.0) dend = phi_level(kPi, g, 0.0, 0.0, kPi);
        if (g < 0.0) dend = phi_level(kPi, -g, 0.0, 0.0, kPi);
        w->tau_lo = kPi;
        w->tau_hi = kPi + dend;
        w->pieces = {{kPi, 0.0, dend, false}};
        w->reg_tau = kPi + dend;
        break;
      }
    }
    if (w->half_turn) {
      w->tau_lo = w->tau_hi = w->reg_tau = kPi;
      w->sign_ys = m == HalfMap::kPiPlus ? -1.0 : 1.0;
      w->sign_ye = -w->sign_ys;
    } else {
      // regular-end ordinates; the exact zero is imposed where the window is defined by it
      const Window::Piece& first = w->pieces.front();
      const double dreg = first.singular_hi ? first.dlo : first.dhi;
      if (w->reg_tau == 0.0) {
        w->reg_ys = w->reg_ye = 0.0;
      } else {
        const Window::Point p = w->at(first.base, dreg);
        w->reg_ys = p.ys;
        w->reg_ye = p.ye;
        if (m == HalfMap::kPiO) w->reg_ys = 0.0;
        if (m == HalfMap::kPiBarO) w->reg_ye = 0.0;
        if (m == HalfMap::kPiPlus) {
          if (g > 0.0) w->reg_ys = 0.0;
          if (g < 0.0) w->reg_ye = 0.0;
          if (g == 0.0) w->reg_ys = w->reg_ye = 0.0;
        }
      }
      const Window::Point mid = w->at(first.base, 0.5 * (first.dlo + first.dhi));
      w->sign_ys = mid.ys > 0.0 ? 1.0 : -1.0;
      w->sign_ye = mid.ye > 0.0 ? 1.0 : -1.0;
    }
    windows_[i] = std::move(w);
  }
}

bool HalfMaps::available(HalfMap m) const { return !failures_[static_cast<int>(m)].has_value(); }

void HalfMaps::require(HalfMap m) const {
  const auto& f = failures_[static_cast<int>(m)];
  if (f) throw Error(f->code, f->message);
}

const HalfMaps::Window& HalfMaps::window(HalfMap m) const {
  require(m);
  const auto& w = windows_[static_cast<int>(m)];
  if (!w) {
    throw Error(ErrorCode::kUnsupportedRegime,
                std::string(half_map_name(m)) + ": closed-form angle window needs b2 <= -1, got b2 = " +
                    fmt(params_.b2));
  }
  return *w;
}

AngleWindow HalfMaps::angle_window(HalfMap m) const {
  const Window& w = window(m);
  return {w.tau_lo, w.tau_hi};
}

double HalfMaps::regular_end_input(HalfMap m) const { return window(m).reg_ys; }
double HalfMaps::regular_end_output(HalfMap m) const { return window(m).reg_ye; }

OrdinateEval HalfMaps::solve(HalfMap m, double target, bool from_input) const {
  const Window& w = window(m);
  OrdinateEval r;
  r.route = Route::kParametric;
  auto finish = [&](double tau, double ys, double ye) {
    r.y_in = ys;
    r.y_out = ye;
    r.angle = tau;
    r.flight_time = tau / w.beta;
    if (ys == 0.0) {
      r.dy_out_dy_in = 0.0;
      r.derivative_is_limit = true;
    } else if (ye == 0.0) {
      r.dy_out_dy_in = std::copysign(kInf, w.sign_ys * w.sign_ye);
      r.derivative_is_limit = true;
    } else {
      r.dy_out_dy_in = std::exp(2.0 * w.gamma * tau) * ys / ye;
    }
    return r;
  };

  const double sign = from_input ? w.sign_ys : w.sign_ye;
  const char* side = from_input ? "input" : "output";
  if (w.half_turn) {
    if (target * sign < 0.0) {
      throw Error(ErrorCode::kDomainError, std::string(half_map_name(m)) + ": " + side +
                                               " ordinate " + fmt(target) + " has the wrong sign");
    }
    const double k = std::exp(w.gamma * kPi);
    if (from_input) return finish(kPi, target, -k * target);
    return finish(kPi, -target / k, target);
  }

  const double reg = from_input ? w.reg_ys : w.reg_ye;
  // section values are converted by one multiplication; absorb that rounding at the regular end
  if (std::abs(target - reg) <= 1e-14 * std::abs(reg)) return finish(w.reg_tau, w.reg_ys, w.reg_ye);
  if ((target - reg) * sign < 0.0) {
    throw Error(ErrorCode::kDomainError, std::string(half_map_name(m)) + ": " + side + " ordinate " +
                                             fmt(target) + " outside the range bounded by " + fmt(reg));
  }

  auto value = [&](const Window::Piece& pc, double d) {
    const Window::Point p = w.at(pc.base, d);
    return from_input ? p.ys : p.ye;
  };
  // pieces are monotone and ordered away from the regular end
  std::size_t k = 0;
  while (k + 1 < w.pieces.size()) {
    const Window::Piece& pc = w.pieces[k];
    const double edge = pc.singular_hi ? pc.dhi : pc.dlo;
    if ((value(pc, edge) - target) * sign >= 0.0) break;
    ++k;
  }
  const Window::Piece& pc = w.pieces[k];
  double lo = pc.dlo, hi = pc.dhi;
  if (pc.singular_hi && hi == 0.0) hi = -kTiny;
  if (!pc.singular_hi && lo == 0.0) lo = kTiny;
  if (pc.singular_hi && pc.base == 0.0 && hi == kPi) hi = kPi * (1.0 - 1e-16);
  const bool first_piece = k == 0;
  const double dreg = pc.singular_hi ? pc.dlo : pc.dhi;
  auto fdf = [&](double d) {
    if (first_piece && d == dreg) return std::pair<double, double>{reg - target, 1.0};
    const Window::Point p = w.at(pc.base, d);
    return from_input ? std::pair<double, double>{p.ys - target, p.dys}
                      : std::pair<double, double>{p.ye - target, p.dye};
  };
  Root root;
  try {
    root = solve_bracketed(fdf, lo, hi);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConvergenceError, std::string(half_map_name(m)) + ": angle solve for " + side +
                                                  " ordinate " + fmt(target) + " failed on [" + fmt(pc.base + lo) +
                                                  ", " + fmt(pc.base + hi) + "]: " + e.what());
  }
  const Window::Point p = w.at(pc.base, root.x);
  const double tau = pc.base + root.x;
  if (w.identity) {
    return from_input ? finish(tau, target, -target) : finish(tau, -target, target);
  }
  return from_input ? finish(tau, target, p.ye) : finish(tau, p.ys, target);
}

OrdinateEval HalfMaps::eval_ordinate(HalfMap m, double y_in) const {
  require(m);
  if (!parametric_) return eval_event(m, y_in);
  if (m == HalfMap::kPiOReturn) {
    const double limit = window(HalfMap::kPiBarO).reg_ys;
    if (y_in > limit && y_in <= limit + 1e-13 * std::abs(limit)) y_in = limit;
    if (y_in > limit) {
      throw Error(ErrorCode::kDomainError, "pi_o_return: orbit from ordinate " + fmt(y_in) +
                                               " reaches x = -1 (bound " + fmt(limit) + ")");
    }
  }
  return solve(m, y_in, true);
}

OrdinateEval HalfMaps::inverse_ordinate(HalfMap m, double y_out) const {
  require(m);
  if (!parametric_) {
    throw Error(ErrorCode::kUnsupportedRegime, std::string(half_map_name(m)) + ": inverse needs b2 <= -1");
  }
  OrdinateEval r = solve(m, y_out, false);
  if (m == HalfMap::kPiOReturn && r.y_in > window(HalfMap::kPiBarO).reg_ys) {
    throw Error(ErrorCode::kDomainError, "pi_o_return: preimage orbit reaches x = -1");
  }
  return r;
}

OrdinateEval HalfMaps::eval_event(HalfMap m, double y_in) const {
  require(m);
  const Zone zone = half_map_zone(m);
  const ZoneFlow flow(params_, zone);
  const Vec2 start{section_line_x(input_section(m)), y_in};
  const double kx = section_line_x(output_section(m));
  const Line target = kx < 0.0 ? Line::kMinus : Line::kPlus;
  CrossingEvent ev;
  try {
    ev = zone == Zone::kCentral ? first_exit(flow, start, TimeSign::kForward)
                                : first_crossing(flow, start, target, TimeSign::kForward);
  } catch (const Error& e) {
    throw Error(e.code() == ErrorCode::kNoCrossing ? ErrorCode::kDomainError : e.code(),
                std::string(half_map_name(m)) + ": " + e.what());
  }
  if (ev.line != target) {
    throw Error(ErrorCode::kDomainError, std::string(half_map_name(m)) + ": orbit from ordinate " + fmt(y_in) +
                                             " leaves through the other switching line");
  }
  OrdinateEval r;
  r.route = Route::kEvent;
  r.y_in = y_in;
  r.y_out = ev.point.y;
  r.angle = ev.angle;
  r.flight_time = ev.time;
  const double g = flow.spectrum().gamma;
  if (y_in == 0.0) {
    r.dy_out_dy_in = 0.0;
    r.derivative_is_limit = true;
  } else if (r.y_out == 0.0) {
    r.dy_out_dy_in = kInf;
    r.derivative_is_limit = true;
  } else {
    r.dy_out_dy_in = std::exp(2.0 * g * ev.angle) * y_in / r.y_out;
  }
  return r;
}

double HalfMaps::ordinate_of(Section s, double value) const {
  const double scale = section_scale(s, params_.b2);
  if (scale == 0.0) {
    throw Error(ErrorCode::kDomainError, std::string(section_name(s)) + " is not a transversal half-section at b2 = " +
                                             fmt(params_.b2));
  }
  return scale * value;
}

double HalfMaps::value_of(Section s, double ordinate) const {
  const double scale = section_scale(s, params_.b2);
  if (scale == 0.0) {
    throw Error(ErrorCode::kDomainError, std::string(section_name(s)) + " is not a transversal half-section at b2 = " +
                                             fmt(params_.b2));
  }
  return ordinate / scale;
}

HalfMapEval HalfMaps::to_sections(HalfMap m, const OrdinateEval& o) const {
  HalfMapEval e;
  e.map = m;
  e.input = {input_section(m), value_of(input_section(m), o.y_in)};
  e.output = {output_section(m), value_of(output_section(m), o.y_out)};
  e.flight_time = o.flight_time;
  e.angle = o.angle;
  e.route = o.route;
  e.derivative_is_limit = o.derivative_is_limit;
  const double si = section_scale(input_section(m), params_.b2);
  const double so = section_scale(output_section(m), params_.b2);
  if (o.derivative_is_limit) {
    e.derivative = o.dy_out_dy_in == 0.0 ? 0.0 : kInf;
  } else {
    e.derivative = o.dy_out_dy_in * si / so;
  }
  return e;
}

HalfMapEval HalfMaps::eval(HalfMap m, double input) const {
  if (!(input >= 0.0)) {
    throw Error(ErrorCode::kDomainError, std::string(half_map_name(m)) + ": section value must be >= 0, got " +
                                             fmt(input));
  }
  const double y = ordinate_of(input_section(m), input);
  ordinate_of(output_section(m), 0.0);
  HalfMapEval e = to_sections(m, eval_ordinate(m, y));
  e.input.value = input;
  return e;
}

HalfMapEval HalfMaps::inverse(HalfMap m, double output) const {
  if (!(output >= 0.0)) {
    throw Error(ErrorCode::kDomainError, std::string(half_map_name(m)) + ": section value must be >= 0, got " +
                                             fmt(output));
  }
  const double y = ordinate_of(output_section(m), output);
  ordinate_of(input_section(m), 0.0);
  HalfMapEval e = to_sections(m, inverse_ordinate(m, y));
  e.output.value = output;
  return e;
}

HalfMapEval pi_minus(const CanonicalParams& p, double c) { return HalfMaps(p).eval(HalfMap::kPiMinus, c); }
HalfMapEval pi_o(const CanonicalParams& p, double d) { return HalfMaps(p).eval(HalfMap::kPiO, d); }
HalfMapEval pi_plus(const CanonicalParams& p, double a) { return HalfMaps(p).eval(HalfMap::kPiPlus, a); }
HalfMapEval pi_bar_o(const CanonicalParams& p, double b) { return HalfMaps(p).eval(HalfMap::kPiBarO, b); }
HalfMapEval pi_o_return(const CanonicalParams& p, double b) { return HalfMaps(p).eval(HalfMap::kPiOReturn, b); }

Landmarks compute_landmarks(const CanonicalParams& params) {
  if (!(params.b2 < -1.0)) {
    throw Error(ErrorCode::kUnsupportedRegime, "landmarks are defined in section units for b2 < -1, got b2 = " +
                                                   fmt(params.b2));
  }
  const HalfMaps hm(params);
  for (HalfMap m : {HalfMap::kPiMinus, HalfMap::kPiO, HalfMap::kPiPlus, HalfMap::kPiBarO}) hm.require(m);
  const double sp = params.b2 + 1.0;
  Landmarks L;
  L.a_o_star = hm.regular_end_output(HalfMap::kPiO) / sp;
  L.b_o_star = hm.regular_end_input(HalfMap::kPiBarO) / -sp;
  const double t_plus = zone_spectrum(params, Zone::kPlus).t;
  L.plus_repelling = t_plus > 0.0;
  double b_min = 0.0;
  if (t_plus > 0.0) {
    L.b_plus_star = hm.regular_end_output(HalfMap::kPiPlus) / -sp;
    L.a_plus_star = *L.b_plus_star;
    b_min = *L.b_plus_star;
  } else if (t_plus < 0.0) {
    L.a_plus_star = hm.regular_end_input(HalfMap::kPiPlus) / sp;
  }
  if (L.b_o_star >= b_min) {
    L.a_o_plus = hm.inverse(HalfMap::kPiPlus, L.b_o_star).input.value;
    if (*L.a_o_plus > L.a_o_star) {
      const double d = hm.inverse(HalfMap::kPiO, *L.a_o_plus).input.value;
      L.c_star = hm.inverse(HalfMap::kPiMinus, d).input.value;
    }
  }
  return L;
}

LandmarkOrdinates landmark_ordinates(const CanonicalParams& params) {
  LandmarkOrdinates r;
  if (params.b2 <= -1.0) {
    const HalfMaps hm(params);
    r.pi_o_of_zero = hm.regular_end_output(HalfMap::kPiO);
    const double y = hm.regular_end_input(HalfMap::kPiBarO);
    r.bar_o_inv_of_zero = y;
    r.plus_inv_bar_inv = hm.inverse_ordinate(HalfMap::kPiPlus, y).y_in;
    return r;
  }
  const ZoneFlow central(params, Zone::kCentral);
  const ZoneFlow plus(params, Zone::kPlus);
  const Vec2 p_minus{-1.0, 0.0};
  r.pi_o_of_zero = first_crossing(central, p_minus, Line::kPlus, TimeSign::kForward).point.y;
  const double y = first_crossing(central, p_minus, Line::kPlus, TimeSign::kBackward).point.y;
  r.bar_o_inv_of_zero = y;
  r.plus_inv_bar_inv = first_crossing(plus, {1.0, y}, Line::kPlus, TimeSign::kBackward).point.y;
  return r;
}

int landmark_difference_sign(const CanonicalParams& params) {
  const double d = landmark_ordinates(params).difference();
  return d > 0.0 ? -1 : (d < 0.0 ? 1 : 0);
}

}  // namespace pwl3

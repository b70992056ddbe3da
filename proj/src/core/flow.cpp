#include "pwl3/flow.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "pwl3/error.hpp"
#include "pwl3/roots.hpp"

namespace pwl3 {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxIntervals = 20000;

}  // namespace

double phi(double x, double y) noexcept {
  const double r = std::abs(x) * std::sqrt(1.0 + y * y);
  if (r < 0.25) {
    // sum_{n>=2} (1+y^2) Im(q^{n-1}) x^n / n!, q = y + i
    const std::complex<double> q(y, 1.0);
    std::complex<double> qp = q;
    const double qabs = std::abs(q);
    double xn = x * x / 2.0;
    double bound = qabs * std::abs(xn);
    double sum = 0.0;
    for (int n = 2; n < 40; ++n) {
      sum += qp.imag() * xn;
      if (bound <= 1e-18 * std::abs(sum)) break;
      qp *= q;
      xn *= x / (n + 1);
      bound *= qabs * std::abs(x) / (n + 1);
    }
    return (1.0 + y * y) * sum;
  }
  return 1.0 - std::exp(x * y) * (std::cos(x) - y * std::sin(x));
}

double phi_pi_offset(double delta, double y) noexcept {
  return 1.0 + std::exp((kPi + delta) * y) * (std::cos(delta) - y * std::sin(delta));
}

ZoneFlow::ZoneFlow(const CanonicalParams& params, Zone zone)
    : spec_(zone_spectrum(params, zone)), field_(build_system(params).field(zone)) {
  if (!spec_.complex_eigenvalues) {
    real_rate_ = std::sqrt(std::max(0.0, spec_.alpha * spec_.alpha - spec_.d));
  }
}

Vec2 ZoneFlow::at(double s, Vec2 p) const {
  if (s == 0.0) return p;
  const Vec2 e = spec_.equilibrium;
  const Vec2 u = p - e;
  const Mat2& A = field_.A;
  const double al = spec_.alpha;
  const Vec2 w{(A.a - al) * u.x + A.b * u.y, A.c * u.x + (A.d - al) * u.y};
  double c = 0.0, k = 0.0;
  if (spec_.complex_eigenvalues) {
    c = std::cos(spec_.beta * s);
    k = std::sin(spec_.beta * s) / spec_.beta;
  } else if (real_rate_ > 0.0) {
    c = std::cosh(real_rate_ * s);
    k = std::sinh(real_rate_ * s) / real_rate_;
  } else {
    c = 1.0;
    k = s;
  }
  const double g = std::exp(al * s);
  return e + g * (c * u + k * w);
}

namespace {

// x(tau) - k along the orbit, tau = beta |s|:
//   f(tau) = C + e^{g tau} (P cos tau + Q sin tau)
struct CrossingFunction {
  double C, P, Q, g;

  double value(double t) const { return C + std::exp(g * t) * (P * std::cos(t) + Q * std::sin(t)); }
  double slope(double t) const {
    return std::exp(g * t) * ((g * P + Q) * std::cos(t) + (g * Q - P) * std::sin(t));
  }
};

CrossingFunction crossing_function(const ZoneFlow& flow, Vec2 p, double k, double sigma) {
  const ZoneSpectrum& sp = flow.spectrum();
  const Mat2& A = flow.field().A;
  const Vec2 u = p - sp.equilibrium;
  const double q = ((A.a - sp.alpha) * u.x + A.b * u.y) / sp.beta;
  return {sp.equilibrium.x - k, u.x, sigma * q, sigma * sp.gamma};
}

double zone_side(Zone z, Line l) {
  switch (z) {
    case Zone::kMinus: return -1.0;
    case Zone::kPlus: return 1.0;
    case Zone::kCentral: return l == Line::kMinus ? 1.0 : -1.0;
  }
  return 0.0;
}

// Smallest tau > 0 with f(tau) = 0, or a negative value when the orbit never
// reaches the line. Throws BracketFailure when the scan gives up.
double first_root(const CrossingFunction& f) {
  const double amp = std::hypot(f.P, f.Q);
  if (amp == 0.0) return -1.0;
  const double scale = std::max({1.0, std::abs(f.C), amp});
  const double ztol = 1e-13 * scale;
  // f' = e^{g tau} R cos(tau - theta): monotone between consecutive zeros of cos(tau - theta)
  const double M = f.g * f.P + f.Q;
  const double N = f.g * f.Q - f.P;
  const double theta = std::atan2(N, M);
  double first = std::fmod(theta + kPi / 2.0, kPi);
  if (first < 0.0) first += kPi;

  double lo = 0.0;
  double hi = first;
  double flo = f.value(lo);
  for (int i = 0; i < kMaxIntervals; ++i) {
    if (f.g < 0.0 && f.C != 0.0 && amp * std::exp(f.g * lo) < std::abs(f.C) * (1.0 - 1e-14)) {
      return -1.0;
    }
    if (f.g == 0.0 && lo > 2.0 * kPi) return -1.0;
    if (hi > lo) {
      const double fhi = f.value(hi);
      if (std::abs(flo) > ztol) {
        if (std::abs(fhi) <= ztol) return hi;
        if ((flo > 0.0) != (fhi > 0.0)) {
          RootOptions opt;
          opt.switch_width = 1e-3;
          const Root r = solve_bracketed(
              [&](double t) { return std::pair<double, double>{f.value(t), f.slope(t)}; }, lo, hi, opt);
          return r.x;
        }
      }
      flo = fhi;
    }
    lo = hi;
    hi = lo + kPi;
  }
  throw Error(ErrorCode::kBracketFailure, "no sign change of the crossing function within the angle window");
}

}  // namespace

CrossingEvent first_crossing(const ZoneFlow& flow, Vec2 p, Line line, TimeSign time_sign) {
  const ZoneSpectrum& sp = flow.spectrum();
  if (!sp.complex_eigenvalues) {
    throw Error(ErrorCode::kUnsupportedZoneType,
                "zone " + std::string(zone_name(sp.zone)) + " has real eigenvalues");
  }
  const double k = line_x(line);
  const double sigma = sign_of(time_sign);
  const CrossingFunction f = crossing_function(flow, p, k, sigma);
  const double tau = first_root(f);
  if (tau < 0.0) {
    throw Error(ErrorCode::kNoCrossing, "orbit never reaches x = " + std::to_string(static_cast<int>(k)));
  }
  CrossingEvent ev;
  ev.angle = tau;
  ev.time = sigma * tau / sp.beta;
  ev.point = flow.at(ev.time, p);
  ev.point.x = k;
  ev.line = line;
  const double xdot = -ev.point.y;  // x' = -y on both switching lines
  ev.tangential = std::abs(xdot) < 1e-9;
  ev.direction = sigma * xdot * zone_side(sp.zone, line) < 0.0 ? CrossingDirection::kOutOfZone
                                                                 : CrossingDirection::kIntoZone;
  return ev;
}

bool reaches(const ZoneFlow& flow, Vec2 p, Line line, TimeSign time_sign) {
  const ZoneSpectrum& sp = flow.spectrum();
  if (!sp.complex_eigenvalues) return false;
  try {
    return first_root(crossing_function(flow, p, line_x(line), sign_of(time_sign))) >= 0.0;
  } catch (const Error&) {
    return false;
  }
}

CrossingEvent first_exit(const ZoneFlow& flow, Vec2 p, TimeSign time_sign) {
  const Zone z = flow.zone();
  if (z == Zone::kMinus) return first_crossing(flow, p, Line::kMinus, time_sign);
  if (z == Zone::kPlus) return first_crossing(flow, p, Line::kPlus, time_sign);
  const bool to_minus = reaches(flow, p, Line::kMinus, time_sign);
  const bool to_plus = reaches(flow, p, Line::kPlus, time_sign);
  if (!to_minus && !to_plus) {
    throw Error(ErrorCode::kNoCrossing, "orbit never leaves the central zone");
  }
  if (!to_plus) return first_crossing(flow, p, Line::kMinus, time_sign);
  if (!to_minus) return first_crossing(flow, p, Line::kPlus, time_sign);
  const CrossingEvent em = first_crossing(flow, p, Line::kMinus, time_sign);
  const CrossingEvent ep = first_crossing(flow, p, Line::kPlus, time_sign);
  return em.angle <= ep.angle ? em : ep;
}

}  // namespace pwl3

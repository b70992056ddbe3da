#include "pwl3/perturb.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "pwl3/error.hpp"
#include "pwl3/halfmaps.hpp"

namespace pwl3 {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Central {
  double alpha, beta, gamma, t;
};

Central central(const CanonicalParams& p) {
  const ZoneSpectrum s = zone_spectrum(p, Zone::kCentral);
  if (!s.complex_eigenvalues) throw Error(ErrorCode::kNonFocusZone, "central zone has real eigenvalues");
  return {s.alpha, s.beta, s.gamma, s.t};
}

ExpansionCoeffs base(const CanonicalParams& p, ExpansionTarget target) {
  ExpansionCoeffs e;
  e.target = target;
  e.tau_o = tau_o(p);
  e.tau_bar_o = tau_bar_o(p);
  return e;
}

}  // namespace

std::string_view expansion_target_name(ExpansionTarget t) noexcept {
  switch (t) {
    case ExpansionTarget::kPiO0: return "PiO0";
    case ExpansionTarget::kPiBarOInv0: return "PiBarOInv0";
    case ExpansionTarget::kPiPlusInvBar0: return "PiPlusInvBar0";
    case ExpansionTarget::kDisplacement0: return "Displacement0";
  }
  return "?";
}

std::string_view sign_class_name(SignClass s) noexcept {
  switch (s) {
    case SignClass::kAoStarGreater: return "AoStarGreater";
    case SignClass::kAoStarLess: return "AoStarLess";
    case SignClass::kZero: return "Zero";
  }
  return "?";
}

double ExpansionCoeffs::evaluate(double b2) const {
  const double h = b2 + 1.0;
  double v = c0 + c1 * h;
  if (order >= 2) v += c2 * h * h;
  return v;
}

double tau_o(const CanonicalParams& p) {
  const Central c = central(p);
  return std::atan2(c.beta, c.alpha);
}

double tau_bar_o(const CanonicalParams& p) { return kPi - tau_o(p); }

StarredPlus starred_plus(const CanonicalParams& p) {
  CanonicalParams q = p;
  q.b2 = -1.0;
  const ZoneSpectrum s = zone_spectrum(q, Zone::kPlus);
  if (!s.complex_eigenvalues) {
    throw Error(ErrorCode::kNonFocusZone, "plus zone at b2 = -1 has real eigenvalues");
  }
  return {s.d, s.beta, s.gamma, s.alpha};
}

ExpansionCoeffs expand_pi_o_0(const CanonicalParams& p) {
  ExpansionCoeffs e = base(p, ExpansionTarget::kPiO0);
  const Central c = central(p);
  const double E = std::exp(c.gamma * e.tau_o);
  e.c0 = -2.0 * E;
  e.c1 = -2.0 * c.alpha + E;
  e.c2 = 0.25 / E;
  return e;
}

ExpansionCoeffs expand_pi_bar_o_inv_0(const CanonicalParams& p) {
  ExpansionCoeffs e = base(p, ExpansionTarget::kPiBarOInv0);
  const Central c = central(p);
  const double E = std::exp(-c.gamma * e.tau_bar_o);
  e.c0 = 2.0 * E;
  e.c1 = -(2.0 * c.alpha + E);
  e.c2 = -0.25 / E;
  return e;
}

ExpansionCoeffs expand_pi_plus_inv_bar(const CanonicalParams& p) {
  ExpansionCoeffs e = base(p, ExpansionTarget::kPiPlusInvBar0);
  const Central c = central(p);
  const StarredPlus s = starred_plus(p);
  e.starred = s;
  const double ao = c.alpha, go = c.gamma;
  const double ap = s.alpha, d = s.d, b = s.beta, g = s.gamma;
  const double Eo = std::exp(go * e.tau_bar_o);
  const double X = std::exp(-(go * e.tau_bar_o + g * kPi));
  const double b3 = b * b * b, b6 = b3 * b3;
  e.c0 = -2.0 * X;
  e.c1 = X * (2.0 * Eo * (ao - ap / d) + (1.0 - kPi * g / (b * b))) - 2.0 * ap / d;
  // printed second-order term; the bare alpha in e^{gamma+* pi alpha} is read as 1
  const double bracket = d * b6 * Eo * Eo * (d + std::exp(2.0 * g * kPi) - 1.0) +
                         4.0 * ap * b3 * Eo * (kPi * d * (ao * d - ap) + 2.0 * b3 * (std::exp(g * kPi) + 1.0)) +
                         kPi * d * d * ap * (2.0 * b3 - kPi * ap + 3.0 * b);
  e.c2 = X / (4.0 * d * d * b6) * bracket;
  return e;
}

ExpansionCoeffs displacement_expansion(const CanonicalParams& p) {
  ExpansionCoeffs e = base(p, ExpansionTarget::kDisplacement0);
  const Central c = central(p);
  const StarredPlus s = starred_plus(p);
  e.starred = s;
  const double tp = 2.0 * s.alpha;
  const double S = (c.gamma + s.gamma) * kPi;
  const double X = std::exp(-(c.gamma * e.tau_bar_o + s.gamma * kPi));
  e.c0 = 2.0 * X * (1.0 - std::exp(S));
  e.c1 = std::exp(-S) * (std::exp(c.gamma * e.tau_o) * (kPi * tp / (2.0 * s.beta * s.beta * s.beta) + std::exp(S) - 1.0) +
                         (tp / s.d - c.t) * (std::exp(S) + std::exp(c.gamma * kPi)));
  e.c2 = kNaN;
  e.order = 1;
  return e;
}

double numerical_target(const CanonicalParams& p, ExpansionTarget target) {
  const LandmarkOrdinates o = landmark_ordinates(p);
  switch (target) {
    case ExpansionTarget::kPiO0: return o.pi_o_of_zero;
    case ExpansionTarget::kPiBarOInv0: return o.bar_o_inv_of_zero;
    case ExpansionTarget::kPiPlusInvBar0: return o.plus_inv_bar_inv;
    case ExpansionTarget::kDisplacement0: return o.difference();
  }
  return kNaN;
}

SignClassification classify_sign(const CanonicalParams& p, double gate) {
  const Central c = central(p);
  const StarredPlus s = starred_plus(p);
  SignClassification r;
  r.gamma_sum = c.gamma + s.gamma;
  const double h = p.b2 + 1.0;
  r.extrapolated = std::abs(h) > gate;
  if (std::abs(r.gamma_sum) > 1e-12) {
    r.prop_case = r.gamma_sum > 0.0 ? 'a' : 'b';
    r.sign = r.gamma_sum > 0.0 ? SignClass::kAoStarGreater : SignClass::kAoStarLess;
    return r;
  }
  r.prop_case = c.gamma > 0.0 ? 'c' : 'd';
  const double tp = 2.0 * s.alpha;
  r.first_order = std::exp(c.gamma * tau_o(p)) * kPi * tp / (2.0 * s.beta * s.beta * s.beta) +
                  (tp / s.d - c.t) * (1.0 + std::exp(c.gamma * kPi));
  if (h == 0.0) {
    r.sign = SignClass::kZero;
    return r;
  }
  const double D = r.first_order * h;
  if (D == 0.0) {
    throw Error(ErrorCode::kInconclusive, "constant and first-order terms of the displacement both vanish");
  }
  // D > 0 means a_o* - a_o+ < 0
  r.sign = D > 0.0 ? SignClass::kAoStarLess : SignClass::kAoStarGreater;
  return r;
}

double FamilySpec::f2() const {
  const double r = (c11 + a1) / a1;
  return a1 * c11 - r * r - epsilon;
}

void validate_family(const FamilySpec& f) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidFamily, what); };
  for (double v : {f.a1, f.c11, f.a11, f.d2, f.epsilon, f.b2}) {
    if (!std::isfinite(v)) fail("family parameters must be finite");
  }
  if (f.a1 == 0.0) fail("a1 != 0 violated");
  if (std::abs(f.a11 + f.a1) > 1e-12 * std::max(1.0, std::abs(f.a1))) {
    std::ostringstream os;
    os.precision(17);
    os << "a11 = -a1 violated (a11 = " << f.a11 << ", a1 = " << f.a1 << ")";
    fail(os.str());
  }
  if (!(f.a1 * (f.c11 + f.a1) < 0.0)) fail("a1 (c11 + a1) < 0 violated");
  if (!(4.0 - f.a1 * f.a1 > 0.0)) fail("4 - a1^2 > 0 violated");
  if (!(1.0 - f.a1 * f.a1 - f.b2 + f.d2 > 0.0)) fail("1 - a1^2 - b2 + d2 > 0 violated");
}

CanonicalParams build_family(const FamilySpec& f) {
  validate_family(f);
  return {.a11 = f.a11, .a1 = f.a1, .b2 = f.b2, .d2 = f.d2, .c11 = f.c11, .f2 = f.f2()};
}

CanonicalParams build_family(double a1, double c11, double a11, double d2, double epsilon, double b2) {
  return build_family(FamilySpec{a1, c11, a11, d2, epsilon, b2});
}

double family_gamma_plus(const FamilySpec& f) {
  const double s = f.c11 + f.a1;
  return -f.a1 / std::sqrt(4.0 - f.a1 * f.a1 + 4.0 * f.a1 * f.a1 * (f.b2 + 1.0 + f.epsilon) / (s * s));
}

FamilySpec random_family(std::mt19937_64& rng, char prop_case, double b2_offset) {
  if (prop_case < 'a' || prop_case > 'd') {
    throw Error(ErrorCode::kInvalidArgument, std::string("unknown case '") + prop_case + "'");
  }
  std::uniform_real_distribution<double> mag_a1(0.3, 1.5), mag_s(0.2, 1.2), d2(1.0, 5.0), mag_eps(0.1, 0.4);
  std::bernoulli_distribution coin(0.5);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    double sign_a1 = coin(rng) ? 1.0 : -1.0;
    if (prop_case == 'c') sign_a1 = 1.0;
    if (prop_case == 'd') sign_a1 = -1.0;
    FamilySpec f;
    f.a1 = sign_a1 * mag_a1(rng);
    f.a11 = -f.a1;
    f.c11 = -sign_a1 * mag_s(rng) - f.a1;
    f.d2 = d2(rng);
    f.b2 = -1.0 + b2_offset;
    const double e = mag_eps(rng);
    // epsilon > 0 shrinks |gamma+*| below |gamma_o|, so the sum takes the sign of a1
    if (prop_case == 'a') f.epsilon = sign_a1 * e;
    if (prop_case == 'b') f.epsilon = -sign_a1 * e;
    try {
      validate_family(f);
    } catch (const Error&) {
      continue;
    }
    const double r = (f.c11 + f.a1) / f.a1;
    const double disc_now = 4.0 * (1.0 + f.b2 + f.epsilon) + r * r * (4.0 - f.a1 * f.a1);
    const double disc_star = 4.0 * f.epsilon + r * r * (4.0 - f.a1 * f.a1);
    if (disc_now <= 0.0 || disc_star <= 0.0) continue;
    return f;
  }
  throw Error(ErrorCode::kInternal, "random_family: rejection sampling did not terminate");
}

}  // namespace pwl3

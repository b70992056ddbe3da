#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "pwl3/error.hpp"

namespace pwl3 {

struct RootOptions {
  double switch_width = 1e-3;  ///< bracket width at which Newton takes over
  double ftol = 0.0;           ///< stop when |f| <= ftol
  double xtol = 0.0;           ///< stop when the bracket is narrower than xtol
  int max_iter = 2000;
};

struct Root {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
};

/// Safeguarded Newton/bisection on a sign-changing bracket [lo, hi].
/// `fdf(x)` returns {f(x), f'(x)}. Bisects until the bracket is narrower than
/// `switch_width`, then runs Newton, falling back to bisection whenever a
/// Newton step leaves the bracket. Iterates down to floating resolution of x
/// unless ftol/xtol stop it earlier.
template <class FdF>
Root solve_bracketed(FdF&& fdf, double lo, double hi, const RootOptions& opt = {}) {
  auto [flo, dlo] = fdf(lo);
  auto [fhi, dhi] = fdf(hi);
  (void)dlo;
  (void)dhi;
  if (flo == 0.0) return {lo, 0.0, 0};
  if (fhi == 0.0) return {hi, 0.0, 0};
  if ((flo > 0.0) == (fhi > 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "no sign change on [" << lo << ", " << hi << "]: f = " << flo << ", " << fhi;
    throw Error(ErrorCode::kBracketFailure, os.str());
  }
  // orient so that f(lo) < 0 < f(hi)
  if (flo > 0.0) {
    std::swap(lo, hi);
    std::swap(flo, fhi);
  }
  double x = 0.5 * (lo + hi);
  for (int it = 1; it <= opt.max_iter; ++it) {
    auto [fx, dfx] = fdf(x);
    if (fx == 0.0 || std::abs(fx) <= opt.ftol) return {x, fx, it};
    if (fx < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double width = std::abs(hi - lo);
    const double mid = 0.5 * (lo + hi);
    if (width <= opt.xtol || mid == lo || mid == hi) {
      return {x, fx, it};
    }
    double next = mid;
    if (width < opt.switch_width && dfx != 0.0 && std::isfinite(dfx)) {
      const double newton = x - fx / dfx;
      const double a = std::min(lo, hi), b = std::max(lo, hi);
      if (newton > a && newton < b) next = newton;
    }
    if (next == x) return {x, fx, it};
    x = next;
  }
  throw Error(ErrorCode::kConvergenceError, "safeguarded Newton did not converge");
}

/// Derivative-free variant (pure bisection).
template <class F>
Root bisect(F&& f, double lo, double hi, const RootOptions& opt = {}) {
  return solve_bracketed(
      [&](double x) { return std::pair<double, double>{f(x), std::numeric_limits<double>::quiet_NaN()}; },
      lo, hi, opt);
}

}  // namespace pwl3

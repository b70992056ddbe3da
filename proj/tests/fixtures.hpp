#pragma once

#include "pwl3/model.hpp"

namespace pwl3::fixtures {

// f2 = a1 c11 - ((c11 + a1) / a1)^2 - eps, a11 = -a1
inline CanonicalParams family(double a1, double c11, double d2, double eps, double b2) {
  const double r = (c11 + a1) / a1;
  return {.a11 = -a1, .a1 = a1, .b2 = b2, .d2 = d2, .c11 = c11, .f2 = a1 * c11 - r * r - eps};
}

inline CanonicalParams family_a(double b2 = -1.09, double eps = 0.21) {
  return family(1.0, -1.4, 4.0, eps, b2);
}

inline CanonicalParams family_b(double b2 = -1.09, double eps = 0.43) {
  return family(-0.8, 1.4, 4.0, eps, b2);
}

}  // namespace pwl3::fixtures

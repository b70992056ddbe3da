#pragma once

#include <random>
#include <string_view>

#include "pwl3/model.hpp"

namespace pwl3 {

/// Ordinates expanded in powers of (b2 + 1):
///   PiO0          ordinate on L+ of the forward central orbit of (-1, 0)
///   PiBarOInv0    ordinate on L+ of the backward central orbit of (-1, 0)
///   PiPlusInvBar0 that point carried backward through R+ back to L+
///   Displacement0 PiO0 - PiPlusInvBar0
enum class ExpansionTarget { kPiO0, kPiBarOInv0, kPiPlusInvBar0, kDisplacement0 };
std::string_view expansion_target_name(ExpansionTarget t) noexcept;

struct StarredPlus {
  double d = 0.0;      ///< d+ at b2 = -1
  double beta = 0.0;   ///< beta+ at b2 = -1
  double gamma = 0.0;  ///< gamma+ at b2 = -1
  double alpha = 0.0;  ///< alpha+ (independent of b2)
};

struct ExpansionCoeffs {
  ExpansionTarget target = ExpansionTarget::kPiO0;
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;  ///< NaN where no second-order term is known
  int order = 2;    ///< highest coefficient available
  double tau_o = 0.0;
  double tau_bar_o = 0.0;
  StarredPlus starred;

  /// c0 + c1 h + c2 h^2 truncated at `order`, h = b2 + 1.
  double evaluate(double b2) const;
};

/// Central-zone angles: tau_o = atan2(beta_o, alpha_o) in (0, pi),
/// tau_bar_o = pi - tau_o.
double tau_o(const CanonicalParams& params);
double tau_bar_o(const CanonicalParams& params);

/// Plus-zone spectrum with b2 replaced by -1. Throws NonFocusZone when the
/// restricted zone has no focus.
StarredPlus starred_plus(const CanonicalParams& params);

ExpansionCoeffs expand_pi_o_0(const CanonicalParams& params);
ExpansionCoeffs expand_pi_bar_o_inv_0(const CanonicalParams& params);
ExpansionCoeffs expand_pi_plus_inv_bar(const CanonicalParams& params);
ExpansionCoeffs displacement_expansion(const CanonicalParams& params);

/// Exact ordinate computed from the half-maps at the parameters' own b2.
double numerical_target(const CanonicalParams& params, ExpansionTarget target);

enum class SignClass { kAoStarGreater, kAoStarLess, kZero };
std::string_view sign_class_name(SignClass s) noexcept;

struct SignClassification {
  SignClass sign = SignClass::kZero;
  char prop_case = '?';          ///< 'a'..'d'
  double gamma_sum = 0.0;        ///< gamma_o + gamma+*
  double first_order = 0.0;      ///< bracket of the first-order term (case c/d)
  bool extrapolated = false;     ///< |b2 + 1| beyond the gate
};

/// Sign of a_o* - a_o+ predicted by the expansion. Throws Inconclusive when
/// both the constant and the first-order terms vanish.
SignClassification classify_sign(const CanonicalParams& params, double gate = 0.2);

/// Two-parameter unfolding of the center configuration.
struct FamilySpec {
  double a1 = 0.0;
  double c11 = 0.0;
  double a11 = 0.0;  ///< must equal -a1
  double d2 = 0.0;
  double epsilon = 0.0;
  double b2 = -1.0;

  /// f2 = a1 c11 - ((c11 + a1) / a1)^2 - epsilon
  double f2() const;
};

/// Throws InvalidFamily naming the violated constraint.
void validate_family(const FamilySpec& spec);
CanonicalParams build_family(const FamilySpec& spec);
CanonicalParams build_family(double a1, double c11, double a11, double d2, double epsilon, double b2);

/// gamma+ = -a1 / sqrt(4 - a1^2 + 4 a1^2 (b2 + 1 + epsilon) / (c11 + a1)^2)
double family_gamma_plus(const FamilySpec& spec);

/// Random admissible family for one of the cases 'a'..'d' of the sign
/// classification: |a1| in [0.3, 1.5], |c11 + a1| in [0.2, 1.2] with sign
/// opposite to a1, d2 in [1, 5], |epsilon| in [0.1, 0.4] for 'a'/'b' and
/// epsilon = 0 for 'c'/'d', b2 = -1 + b2_offset. Draws violating a family
/// constraint or the plus-zone focus condition are rejected and redrawn.
FamilySpec random_family(std::mt19937_64& rng, char prop_case, double b2_offset);

}  // namespace pwl3

#pragma once

#include <array>
#include <span>
#include <string_view>

#include "pwl3/linalg.hpp"

namespace pwl3 {

/// The three zones R-, Ro, R+ separated by the lines x = -1 and x = 1.
enum class Zone { kMinus = 0, kCentral = 1, kPlus = 2 };

std::string_view zone_name(Zone z) noexcept;

/// Zone containing x. Points on a switching line belong to the central zone.
Zone zone_of(double x) noexcept;

/// The six scalars of the normal form.
struct CanonicalParams {
  double a11 = 0.0;  ///< upper-left entry of A-
  double a1 = 0.0;   ///< trace of Ao
  double b2 = 0.0;   ///< offset of Bo
  double d2 = 0.0;   ///< second entry of B-
  double c11 = 0.0;  ///< upper-left entry of A+
  double f2 = 0.0;   ///< second entry of B+

  friend bool operator==(const CanonicalParams&, const CanonicalParams&) = default;
};

/// x' = A x + B restricted to one zone.
struct AffineField {
  Mat2 A;
  Vec2 B;

  Vec2 operator()(Vec2 p) const { return A * p + B; }
};

struct PiecewiseSystem {
  std::array<AffineField, 3> fields;  // indexed by Zone

  const AffineField& field(Zone z) const { return fields[static_cast<int>(z)]; }
  /// The continuous piecewise field X(p).
  Vec2 operator()(Vec2 p) const { return field(zone_of(p.x))(p); }
};

PiecewiseSystem build_system(const CanonicalParams& params);

/// Max componentwise mismatch of adjacent zone fields on x = -1 and x = 1 at
/// the given ordinates.
double continuity_defect(const CanonicalParams& params, std::span<const double> ys);

enum class Locality { kReal, kVirtual, kOnBoundary };
std::string_view locality_name(Locality l) noexcept;

struct ZoneSpectrum {
  Zone zone = Zone::kCentral;
  double t = 0.0;      ///< trace
  double d = 0.0;      ///< determinant
  double alpha = 0.0;  ///< t / 2
  double beta = 0.0;   ///< sqrt(4d - t^2) / 2, zero when eigenvalues are real
  double gamma = 0.0;  ///< alpha / beta, zero when eigenvalues are real
  bool complex_eigenvalues = false;
  Vec2 equilibrium;
  Locality locality = Locality::kVirtual;

  bool is_center() const { return complex_eigenvalues && t == 0.0; }
  bool is_focus() const { return complex_eigenvalues && t != 0.0; }
};

/// Spectrum and equilibrium of one zone. Throws DegenerateZone when det A = 0.
ZoneSpectrum zone_spectrum(const CanonicalParams& params, Zone zone);

struct ContactData {
  Vec2 p_minus{-1.0, 0.0};
  Vec2 p_plus{1.0, 0.0};
  Vec2 pdot_minus;
  Vec2 pdot_plus;
};

ContactData contact_data(const CanonicalParams& params);

/// Rows of the case table keyed on b2.
enum class Table1Case { kB2LessMinus1, kB2EqMinus1, kAbsB2Less1, kB2Eq1, kB2Greater1 };
std::string_view table1_case_name(Table1Case c) noexcept;
Table1Case table1_case(double b2) noexcept;

struct HypothesisReport {
  bool h1 = false;  ///< Xo has a focus
  bool h2 = false;  ///< X- / X+ are a center and a focus of opposite stability to Xo
  Zone center_zone = Zone::kCentral;  ///< side zone hosting the center; kCentral if none
  Table1Case table1 = Table1Case::kAbsB2Less1;
};

HypothesisReport check_hypotheses(const CanonicalParams& params);

struct Classification {
  std::array<ZoneSpectrum, 3> spectra;
  HypothesisReport hypotheses;
};

/// Throws DegenerateZone for a singular zone matrix and NonFocusZone when a
/// zone has real eigenvalues.
Classification classify_equilibria(const CanonicalParams& params);

/// Parameters of the system rotated by 180 degrees; maps b2 > 1 onto b2 < -1.
/// The transform is an involution.
CanonicalParams mirror(const CanonicalParams& params) noexcept;

}  // namespace pwl3

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pwl3/halfmaps.hpp"
#include "pwl3/model.hpp"

namespace pwl3 {

enum class ReturnKind { kThreeZone, kTwoZonePlus };
std::string_view return_kind_name(ReturnKind k) noexcept;

/// One arc of an orbit inside a single zone, from a switching line to the next.
struct OrbitLeg {
  Zone zone = Zone::kCentral;
  HalfMap map = HalfMap::kPiO;
  Vec2 start;
  Vec2 end;
  double flight_time = 0.0;
  double angle = 0.0;
};

struct ReturnEval {
  double input = 0.0;
  double output = 0.0;
  double derivative = 0.0;  ///< chain rule over the legs
  bool derivative_is_limit = false;
  double period = 0.0;      ///< sum of leg flight times
  std::vector<OrbitLeg> legs;
};

/// First-return map on a transversal section, b2 < -1.
///   ThreeZone:   L-O -> L-O, pi_bar_o . pi_plus . pi_o . pi_minus
///   TwoZonePlus: L+I -> L+I, pi_o_return . pi_plus
class ReturnMap {
 public:
  /// Throws UnsupportedRegime naming the failing condition.
  ReturnMap(const CanonicalParams& params, ReturnKind kind);

  ReturnKind kind() const { return kind_; }
  Section section() const;
  const CanonicalParams& params() const { return maps_.params(); }
  const Landmarks& landmarks() const { return landmarks_; }

  /// Half-maps in order of application. pi_minus is omitted when it is the
  /// identity (t- = 0).
  const std::vector<HalfMap>& composition() const { return composition_; }

  double domain_lo() const { return lo_; }
  /// Upper end of the domain; empty for [lo, inf).
  std::optional<double> domain_hi() const { return hi_; }
  bool contains(double v) const;

  /// Throws DomainError outside the domain.
  ReturnEval eval(double v) const;
  double operator()(double v) const { return eval(v).output; }

 private:
  HalfMaps maps_;
  ReturnKind kind_;
  Landmarks landmarks_;
  std::vector<HalfMap> composition_;
  double lo_ = 0.0;
  std::optional<double> hi_;
};

/// Pi(v) - v.
double displacement(const ReturnMap& map, double v);

enum class Stability { kAttracting, kRepelling, kNeutral };
std::string_view stability_name(Stability s) noexcept;
Stability stability_of(double multiplier) noexcept;

/// Areas enclosed by a closed curve inside R-, Ro, R+.
struct ZoneAreas {
  double minus = 0.0;
  double central = 0.0;
  double plus = 0.0;
};

/// Shoelace areas of a closed polyline clipped to each zone.
ZoneAreas zone_areas(std::span<const Vec2> closed_polyline);

/// t- S- + to So + t+ S+ for the given traces (indexed by Zone).
double green_residual(const std::array<double, 3>& traces, const ZoneAreas& areas);

struct LimitCycle {
  enum class Kind { kTwoZone, kThreeZone };
  Kind kind = Kind::kThreeZone;
  SectionCoord fixed_point;   ///< section of the input parameters (rotated back when mirrored)
  std::vector<Vec2> crossings;
  double period = 0.0;
  double multiplier = 0.0;     ///< chain rule
  double multiplier_fd = 0.0;  ///< central finite difference of the return map
  double residual = 0.0;       ///< Pi(v) - v at the fixed point
  Stability stability = Stability::kNeutral;
  ZoneAreas areas;
  double green_residual = 0.0;
  std::array<double, 3> traces{};
  std::vector<OrbitLeg> legs;  ///< in the coordinates of the input parameters
  bool mirrored = false;
};

std::string_view cycle_kind_name(LimitCycle::Kind k) noexcept;

/// Closed polyline of n points along the cycle, clustered near the crossings.
std::vector<Vec2> cycle_polyline(const CanonicalParams& params, const LimitCycle& cycle,
                                 int n = 10000);

/// Green residual of the cycle from shoelace areas on dense polylines
/// (Richardson-extrapolated from 10^4 and 2*10^4 points).
double green_check(const CanonicalParams& params, const LimitCycle& cycle);

struct AnnulusReport {
  bool is_center_config = false;
  Vec2 inner_boundary{1.0, 0.0};
  double outer_ordinate = 0.0;      ///< ordinate on L+ (y > 0) of the orbit tangent to L- at (-1, 0)
  std::vector<OrbitLeg> outer_boundary;
  double displacement_sup = 0.0;    ///< max |P(y) - y| over the samples, ordinates on L+
  int samples = 0;
  int failed_samples = 0;
};

/// Requires b2 = -1 (UnsupportedRegime otherwise). Samples 50 orbits through
/// (1, y), 0 < y < outer_ordinate, using the closed-form flows.
AnnulusReport detect_annulus(const CanonicalParams& params, int samples = 50);

enum class Configuration { k8a, k8b, k9a, k9b, kUndetermined, kCenter };
std::string_view configuration_name(Configuration c) noexcept;

struct ScanSample {
  double v = 0.0;
  double displacement = 0.0;
  bool ok = false;
};

struct ScanOptions {
  int three_zone_samples = 2048;  ///< log-spaced offsets from the domain start
  double three_zone_max = 1e4;
  double three_zone_min_offset = 1e-8;
  int two_zone_samples = 512;     ///< uniform on the two-zone domain
  double root_tol = 1e-10;        ///< bound on |Pi(v) - v| at a root
};

struct CycleSearch {
  std::vector<LimitCycle> cycles;
  std::optional<AnnulusReport> annulus;
  std::optional<Landmarks> landmarks;
  Configuration configuration = Configuration::kUndetermined;
  bool unproven_regime = false;
  bool mirrored = false;
  double infinity_slope = 0.0;  ///< e^{gamma+ pi} of the analysed system
  std::vector<ScanSample> two_zone_scan;
  std::vector<ScanSample> three_zone_scan;
  static constexpr bool exhaustive = false;
  static constexpr std::string_view disclaimer =
      "cycles are the sign changes found on the scan grid; other cycles may exist";
};

/// Scans the two-zone and three-zone displacements and refines every sign
/// change. b2 > 1 is handled by the 180 degree rotation, b2 = +-1 returns the
/// annulus report. Throws UnsupportedRegime for |b2| < 1 and NoBracket (with a
/// summary of the scan table) when no sign change is found.
CycleSearch find_cycles(const CanonicalParams& params, const ScanOptions& options = {});

Configuration configuration_of(const Landmarks& landmarks);

}  // namespace pwl3

#pragma once

#include <string_view>

#include "pwl3/linalg.hpp"
#include "pwl3/model.hpp"

namespace pwl3 {

/// phi(x, y) = 1 - e^{xy} (cos x - y sin x), evaluated without cancellation
/// near x = 0.
double phi(double x, double y) noexcept;

/// phi(pi + delta, y), accurate for small delta.
double phi_pi_offset(double delta, double y) noexcept;

/// Switching lines x = -1 and x = 1.
enum class Line { kMinus, kPlus };
constexpr double line_x(Line l) { return l == Line::kMinus ? -1.0 : 1.0; }

enum class TimeSign { kForward, kBackward };
constexpr double sign_of(TimeSign t) { return t == TimeSign::kForward ? 1.0 : -1.0; }

enum class CrossingDirection { kIntoZone, kOutOfZone };

struct CrossingEvent {
  double time = 0.0;   ///< signed flight time s (negative for backward flights)
  Vec2 point;          ///< crossing point, x snapped to the line
  double angle = 0.0;  ///< swept angle beta * |s|
  Line line = Line::kPlus;
  CrossingDirection direction = CrossingDirection::kOutOfZone;
  bool tangential = false;  ///< |dx/ds| < 1e-9 at the crossing
};

/// Closed-form flow of one zone's linear field, extended to the whole plane.
class ZoneFlow {
 public:
  ZoneFlow(const CanonicalParams& params, Zone zone);

  const ZoneSpectrum& spectrum() const { return spec_; }
  const AffineField& field() const { return field_; }
  Zone zone() const { return spec_.zone; }

  /// Exact value of the flow at time s through p.
  Vec2 at(double s, Vec2 p) const;
  Vec2 velocity(Vec2 p) const { return field_(p); }

 private:
  ZoneSpectrum spec_;
  AffineField field_;
  double real_rate_ = 0.0;  // sqrt(alpha^2 - d) for real eigenvalues
};

/// First crossing of `line` by the orbit of p in the given time direction.
/// Throws NoCrossing when the orbit provably never reaches the line,
/// BracketFailure when the search gives up, UnsupportedZoneType for zones
/// without complex eigenvalues.
CrossingEvent first_crossing(const ZoneFlow& flow, Vec2 p, Line line, TimeSign time_sign);

/// True iff first_crossing would succeed.
bool reaches(const ZoneFlow& flow, Vec2 p, Line line, TimeSign time_sign);

/// First crossing of any boundary line of the flow's zone (both lines for the
/// central zone).
CrossingEvent first_exit(const ZoneFlow& flow, Vec2 p, TimeSign time_sign);

}  // namespace pwl3

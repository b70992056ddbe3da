#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "pwl3/cycles.hpp"
#include "pwl3/flow.hpp"
#include "pwl3/halfmaps.hpp"
#include "pwl3/model.hpp"

namespace pwl3 {

struct StepControl {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double initial_step = 1e-3;
  double min_step = 1e-13;
  double max_step = 0.1;
  long max_steps = 5'000'000;
};

struct OracleSample {
  double t = 0.0;
  Vec2 p;
  Zone zone = Zone::kCentral;
  bool on_boundary = false;  ///< sample sits on a switching line (belongs to both zones)
};

struct OracleOptions {
  StepControl control;
  bool record_samples = true;
  /// Stop at the first crossing (or recorded contact) of this line.
  std::optional<Line> stop_line;
  /// Stop at the first crossing or contact of either line.
  bool stop_on_any_line = false;
  /// Distance to a line below which a turning point counts as a contact.
  double contact_tol = 1e-7;
};

struct OracleTrajectory {
  std::vector<OracleSample> samples;
  std::vector<CrossingEvent> events;   ///< transversal crossings
  std::vector<CrossingEvent> grazing;  ///< rejected contacts, |dx/dt| < 1e-9
  StepControl step_controller;
  Vec2 end;
  double t_end = 0.0;  ///< signed elapsed time
  Zone end_zone = Zone::kCentral;
  long accepted_steps = 0;
  long rejected_steps = 0;
  bool stopped_on_line = false;
};

/// Dormand-Prince 5(4) with PI step control on the piecewise field. Steps are
/// bisected onto x = -1 / x = 1 and integration resumes with the next zone's
/// field. Throws StepUnderflow (with the location) when the controller stalls.
OracleTrajectory integrate(const CanonicalParams& params, Vec2 p0, double t_span, TimeSign direction,
                           const OracleOptions& options = {});

struct OracleMapResult {
  double y_out = 0.0;
  double flight_time = 0.0;
  bool contact = false;  ///< the orbit touched the output line tangentially
};

/// Half-map in raw ordinates by integration only. Throws DomainError when the
/// orbit reaches the wrong line, NoCrossing when it never reaches a line.
OracleMapResult oracle_ordinate_map(const CanonicalParams& params, HalfMap m, double y_in,
                                    const OracleOptions& options = {});

/// Half-map in section units by integration only.
double oracle_half_map(const CanonicalParams& params, HalfMap m, SectionCoord input,
                       const OracleOptions& options = {});

/// Distance between the start of the cycle and the oracle orbit after one period.
double oracle_closure(const CanonicalParams& params, const LimitCycle& cycle, const OracleOptions& options = {});

struct MapCheck {
  HalfMap map = HalfMap::kPiMinus;
  int samples = 0;
  int skipped = 0;
  double max_error = 0.0;
  double worst_input = 0.0;
  double lo = 0.0;  ///< sampled input interval
  double hi = 0.0;
  bool passed = false;
};

struct CycleCheck {
  LimitCycle::Kind kind = LimitCycle::Kind::kThreeZone;
  double fixed_point = 0.0;
  double closure = 0.0;
  bool passed = false;
};

struct VerifyReport {
  std::vector<MapCheck> maps;
  std::vector<CycleCheck> cycles;
  double map_tol = 1e-7;
  double cycle_tol = 1e-6;
  bool passed() const;
};

/// Compares every available half-map against the oracle on `samples` random
/// inputs (uniform on a bounded part of the domain away from the singular
/// ends) and re-integrates every cycle found by find_cycles. b2 < -1.
VerifyReport verify(const CanonicalParams& params, std::uint64_t seed, int samples = 100,
                    double map_tol = 1e-7, double cycle_tol = 1e-6);

/// Quadratic first integral of a zone with a center, H(p) = c u^2 - 2 a u v - b v^2
/// with (u, v) = p - equilibrium and A = [[a, b], [c, -a]].
double center_first_integral(const CanonicalParams& params, Zone zone, Vec2 p);

}  // namespace pwl3

#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "pwl3/error.hpp"
#include "pwl3/flow.hpp"
#include "pwl3/model.hpp"

namespace pwl3 {

/// Transversal half-sections of the switching lines. A section value v >= 0
/// stands for the point (x, scale * v) with
///   LMinusO: x = -1, scale = 1 - b2     LMinusI: x = -1, scale = b2 - 1
///   LPlusI:  x =  1, scale = b2 + 1     LPlusO:  x =  1, scale = -(b2 + 1)
enum class Section { kLMinusO, kLMinusI, kLPlusI, kLPlusO };
std::string_view section_name(Section s) noexcept;
double section_scale(Section s, double b2) noexcept;
double section_line_x(Section s) noexcept;

struct SectionCoord {
  Section section = Section::kLMinusO;
  double value = 0.0;
};

/// pi_minus: LMinusO -> LMinusI through R-
/// pi_o: LMinusI -> LPlusI through Ro
/// pi_plus: LPlusI -> LPlusO through R+
/// pi_bar_o: LPlusO -> LMinusO through Ro
/// pi_o_return: LPlusO -> LPlusI through Ro without touching x = -1
enum class HalfMap { kPiMinus, kPiO, kPiPlus, kPiBarO, kPiOReturn };
constexpr int kHalfMapCount = 5;
std::string_view half_map_name(HalfMap m) noexcept;
/// Parses the names returned by half_map_name. Throws InvalidArgument.
HalfMap parse_half_map(std::string_view name);
Section input_section(HalfMap m) noexcept;
Section output_section(HalfMap m) noexcept;
Zone half_map_zone(HalfMap m) noexcept;

enum class Route { kParametric, kEvent };

/// One transition in raw ordinates on the switching lines.
struct OrdinateEval {
  double y_in = 0.0;
  double y_out = 0.0;
  double angle = 0.0;        ///< tau = beta * s
  double flight_time = 0.0;  ///< s > 0
  double dy_out_dy_in = 0.0;
  bool derivative_is_limit = false;  ///< value is a one-sided limit (0 or inf)
  Route route = Route::kParametric;
};

struct HalfMapEval {
  HalfMap map = HalfMap::kPiMinus;
  SectionCoord input;
  SectionCoord output;
  double flight_time = 0.0;
  double angle = 0.0;
  double derivative = 0.0;  ///< d(output)/d(input) in section units
  bool derivative_is_limit = false;
  Route route = Route::kParametric;
};

/// Admissible angle interval (lo, hi) of a transition.
struct AngleWindow {
  double lo = 0.0;
  double hi = 0.0;
};

/// Evaluator for the half-maps of one parameter set. The parametric route
/// (closed-form relation between start ordinate, end ordinate and angle) is
/// used for b2 <= -1; the event route (closed-form flow plus crossing search)
/// serves b2 > -1 and as a consistency check.
class HalfMaps {
 public:
  explicit HalfMaps(const CanonicalParams& params);

  const CanonicalParams& params() const { return params_; }

  OrdinateEval eval_ordinate(HalfMap m, double y_in) const;
  OrdinateEval inverse_ordinate(HalfMap m, double y_out) const;
  OrdinateEval eval_event(HalfMap m, double y_in) const;

  HalfMapEval eval(HalfMap m, double input) const;
  HalfMapEval inverse(HalfMap m, double output) const;

  /// Throws the error that makes the map unavailable, if any.
  void require(HalfMap m) const;
  bool available(HalfMap m) const;
  AngleWindow angle_window(HalfMap m) const;

  /// Input/output ordinate at the regular end of the angle window.
  double regular_end_input(HalfMap m) const;
  double regular_end_output(HalfMap m) const;

 private:
  struct Window;
  struct Failure {
    ErrorCode code = ErrorCode::kInternal;
    std::string message;
  };

  const Window& window(HalfMap m) const;
  OrdinateEval solve(HalfMap m, double target, bool from_input) const;
  HalfMapEval to_sections(HalfMap m, const OrdinateEval& o) const;
  double ordinate_of(Section s, double value) const;
  double value_of(Section s, double ordinate) const;

  CanonicalParams params_;
  bool parametric_ = true;
  std::array<std::shared_ptr<const Window>, kHalfMapCount> windows_;
  std::array<std::optional<Failure>, kHalfMapCount> failures_;
};

HalfMapEval pi_minus(const CanonicalParams& params, double c);
HalfMapEval pi_o(const CanonicalParams& params, double d);
HalfMapEval pi_plus(const CanonicalParams& params, double a);
HalfMapEval pi_bar_o(const CanonicalParams& params, double b);
HalfMapEval pi_o_return(const CanonicalParams& params, double b);

/// Domain and range constants of the half-maps (section units, b2 < -1).
struct Landmarks {
  double a_o_star = 0.0;    ///< pi_o(0)
  double b_o_star = 0.0;    ///< pi_bar_o^{-1}(0)
  double a_plus_star = 0.0; ///< pi_plus(0) when t+ > 0; left end of dom pi_plus when t+ < 0
  std::optional<double> b_plus_star;  ///< pi_plus(0), t+ > 0 only
  std::optional<double> a_o_plus;     ///< pi_plus^{-1}(b_o_star)
  std::optional<double> c_star;       ///< left end of the three-zone domain when positive
  bool plus_repelling = false;        ///< t+ > 0
};

/// Throws UnsupportedRegime unless b2 < -1, MissingLandmark is never thrown;
/// undefined landmarks are left empty.
Landmarks compute_landmarks(const CanonicalParams& params);

/// Landmark ordinates on L+ used for the sign of a_o* - a_o+.
struct LandmarkOrdinates {
  double pi_o_of_zero = 0.0;      ///< ordinate on L+ of the forward orbit of (-1, 0)
  double bar_o_inv_of_zero = 0.0; ///< ordinate on L+ of the backward central orbit of (-1, 0)
  double plus_inv_bar_inv = 0.0;  ///< ordinate on L+ of the backward orbit of (-1, 0) through Ro then R+
  /// pi_o_of_zero - plus_inv_bar_inv
  double difference() const { return pi_o_of_zero - plus_inv_bar_inv; }
};

LandmarkOrdinates landmark_ordinates(const CanonicalParams& params);

/// Sign of a_o* - a_o+ read off the ordinate difference (opposite signs).
int landmark_difference_sign(const CanonicalParams& params);

}  // namespace pwl3

#include "pwl3/pwl3.h"

#include <cmath>
#include <new>
#include <string>
#include <vector>

#include "pwl3/cycles.hpp"
#include "pwl3/error.hpp"
#include "pwl3/halfmaps.hpp"
#include "pwl3/model.hpp"
#include "pwl3/oracle.hpp"
#include "pwl3/perturb.hpp"

#ifndef PWL3_VERSION
#define PWL3_VERSION "0.0.0"
#endif

struct pwl3_halfmaps {
  pwl3::HalfMaps maps;
};

struct pwl3_cycle_search {
  pwl3::CanonicalParams params;
  pwl3::CycleSearch search;
};

struct pwl3_trajectory {
  pwl3::OracleTrajectory tr;
};

struct pwl3_verify_report {
  pwl3::VerifyReport report;
};

namespace {

thread_local std::string g_last_error;

pwl3_status fail(pwl3_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

template <class F>
pwl3_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return PWL3_OK;
  } catch (const pwl3::Error& e) {
    return fail(static_cast<pwl3_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(PWL3_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PWL3_E_INTERNAL, e.what());
  } catch (...) {
    return fail(PWL3_E_INTERNAL, "unknown exception");
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) throw pwl3::Error(pwl3::ErrorCode::kInvalidArgument, std::string(what) + " is NULL");
}

pwl3::CanonicalParams to_cpp(const pwl3_params* p) {
  need(p, "params");
  return {.a11 = p->a11, .a1 = p->a1, .b2 = p->b2, .d2 = p->d2, .c11 = p->c11, .f2 = p->f2};
}

pwl3_params to_c(const pwl3::CanonicalParams& p) { return {p.a11, p.a1, p.b2, p.d2, p.c11, p.f2}; }

pwl3::HalfMap to_map(int m) {
  if (m < 0 || m >= pwl3::kHalfMapCount) {
    throw pwl3::Error(pwl3::ErrorCode::kInvalidArgument, "half-map index out of range: " + std::to_string(m));
  }
  return static_cast<pwl3::HalfMap>(m);
}

pwl3::ReturnKind to_kind(int k) {
  if (k != PWL3_THREE_ZONE && k != PWL3_TWO_ZONE_PLUS) {
    throw pwl3::Error(pwl3::ErrorCode::kInvalidArgument, "return map kind out of range: " + std::to_string(k));
  }
  return k == PWL3_THREE_ZONE ? pwl3::ReturnKind::kThreeZone : pwl3::ReturnKind::kTwoZonePlus;
}

pwl3_map_eval to_c(const pwl3::HalfMapEval& e) {
  return {e.input.value, e.output.value, e.flight_time, e.angle, e.derivative, e.derivative_is_limit ? 1 : 0,
          e.route == pwl3::Route::kEvent ? 1 : 0};
}

const pwl3::LimitCycle& cycle_at(const pwl3_cycle_search* s, size_t i) {
  need(s, "search");
  if (i >= s->search.cycles.size()) {
    throw pwl3::Error(pwl3::ErrorCode::kInvalidArgument, "cycle index out of range: " + std::to_string(i));
  }
  return s->search.cycles[i];
}

void copy_points(const std::vector<pwl3::Vec2>& pts, double* xy, size_t capacity, size_t* count) {
  need(count, "count");
  *count = pts.size();
  if (xy == nullptr) return;
  for (size_t i = 0; i < pts.size() && i < capacity; ++i) {
    xy[2 * i] = pts[i].x;
    xy[2 * i + 1] = pts[i].y;
  }
}

}  // namespace

extern "C" {

const char* pwl3_version(void) { return PWL3_VERSION; }
const char* pwl3_last_error(void) { return g_last_error.c_str(); }

const char* pwl3_status_name(pwl3_status status) {
  if (status == PWL3_OK) return "Ok";
  return pwl3::error_code_name(static_cast<pwl3::ErrorCode>(status));
}

pwl3_status pwl3_family_params(const pwl3_family* family, pwl3_params* out) {
  return guard([&] {
    need(family, "family");
    need(out, "out");
    const pwl3::FamilySpec spec{family->a1, family->c11, family->a11, family->d2, family->epsilon, family->b2};
    *out = to_c(pwl3::build_family(spec));
  });
}

pwl3_status pwl3_mirror(const pwl3_params* params, pwl3_params* out) {
  return guard([&] {
    need(out, "out");
    *out = to_c(pwl3::mirror(to_cpp(params)));
  });
}

pwl3_status pwl3_classify(const pwl3_params* params, pwl3_classification* out) {
  return guard([&] {
    need(out, "out");
    const pwl3::CanonicalParams p = to_cpp(params);
    const pwl3::Classification c = pwl3::classify_equilibria(p);
    for (int z = 0; z < 3; ++z) {
      const pwl3::ZoneSpectrum& s = c.spectra[z];
      out->zones[z] = {s.t, s.d, s.alpha, s.beta, s.gamma, s.complex_eigenvalues ? 1 : 0, s.equilibrium.x,
                       s.equilibrium.y, static_cast<int>(s.locality)};
    }
    out->h1 = c.hypotheses.h1 ? 1 : 0;
    out->h2 = c.hypotheses.h2 ? 1 : 0;
    out->center_zone = static_cast<int>(c.hypotheses.center_zone);
    out->table1_case = static_cast<int>(c.hypotheses.table1);
    const double ys[] = {-10.0, -1.0, -0.1, 0.0, 0.1, 1.0, 10.0};
    out->continuity_defect = pwl3::continuity_defect(p, ys);
  });
}

const char* pwl3_zone_name(int zone) {
  if (zone < 0 || zone > 2) return "unknown";
  return pwl3::zone_name(static_cast<pwl3::Zone>(zone)).data();
}

const char* pwl3_locality_name(int locality) {
  if (locality < 0 || locality > 2) return "unknown";
  return pwl3::locality_name(static_cast<pwl3::Locality>(locality)).data();
}

const char* pwl3_table1_case_name(int c) {
  if (c < 0 || c > 4) return "unknown";
  return pwl3::table1_case_name(static_cast<pwl3::Table1Case>(c)).data();
}

pwl3_status pwl3_halfmaps_create(const pwl3_params* params, pwl3_halfmaps** out) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    *out = new pwl3_halfmaps{pwl3::HalfMaps(to_cpp(params))};
  });
}

void pwl3_halfmaps_destroy(pwl3_halfmaps* maps) { delete maps; }

int pwl3_halfmap_available(const pwl3_halfmaps* maps, int map) {
  if (maps == nullptr || map < 0 || map >= pwl3::kHalfMapCount) return 0;
  return maps->maps.available(static_cast<pwl3::HalfMap>(map)) ? 1 : 0;
}

pwl3_status pwl3_halfmap_eval(const pwl3_halfmaps* maps, int map, double input, pwl3_map_eval* out) {
  return guard([&] {
    need(maps, "maps");
    need(out, "out");
    *out = to_c(maps->maps.eval(to_map(map), input));
  });
}

pwl3_status pwl3_halfmap_inverse(const pwl3_halfmaps* maps, int map, double output, pwl3_map_eval* out) {
  return guard([&] {
    need(maps, "maps");
    need(out, "out");
    *out = to_c(maps->maps.inverse(to_map(map), output));
  });
}

pwl3_status pwl3_halfmap_eval_ordinate(const pwl3_halfmaps* maps, int map, double y_in, pwl3_map_eval* out) {
  return guard([&] {
    need(maps, "maps");
    need(out, "out");
    const pwl3::OrdinateEval o = maps->maps.eval_ordinate(to_map(map), y_in);
    *out = {o.y_in, o.y_out, o.flight_time, o.angle, o.dy_out_dy_in, o.derivative_is_limit ? 1 : 0,
            o.route == pwl3::Route::kEvent ? 1 : 0};
  });
}

const char* pwl3_halfmap_name(int map) {
  if (map < 0 || map >= pwl3::kHalfMapCount) return "unknown";
  return pwl3::half_map_name(static_cast<pwl3::HalfMap>(map)).data();
}

pwl3_status pwl3_halfmap_parse(const char* name, int* map) {
  return guard([&] {
    need(name, "name");
    need(map, "map");
    *map = static_cast<int>(pwl3::parse_half_map(name));
  });
}

const char* pwl3_section_name(int section) {
  if (section < 0 || section > 3) return "unknown";
  return pwl3::section_name(static_cast<pwl3::Section>(section)).data();
}

int pwl3_halfmap_input_section(int map) {
  if (map < 0 || map >= pwl3::kHalfMapCount) return -1;
  return static_cast<int>(pwl3::input_section(static_cast<pwl3::HalfMap>(map)));
}

int pwl3_halfmap_output_section(int map) {
  if (map < 0 || map >= pwl3::kHalfMapCount) return -1;
  return static_cast<int>(pwl3::output_section(static_cast<pwl3::HalfMap>(map)));
}

pwl3_status pwl3_oracle_half_map(const pwl3_params* params, int map, double input, double* out) {
  return guard([&] {
    need(out, "out");
    const pwl3::HalfMap m = to_map(map);
    *out = pwl3::oracle_half_map(to_cpp(params), m, {pwl3::input_section(m), input});
  });
}

pwl3_status pwl3_landmarks_compute(const pwl3_params* params, pwl3_landmarks* out) {
  return guard([&] {
    need(out, "out");
    const pwl3::Landmarks L = pwl3::compute_landmarks(to_cpp(params));
    *out = {L.a_o_star,
            L.b_o_star,
            L.a_plus_star,
            L.b_plus_star.value_or(NAN),
            L.a_o_plus.value_or(NAN),
            L.c_star.value_or(NAN),
            L.b_plus_star ? 1 : 0,
            L.a_o_plus ? 1 : 0,
            L.c_star ? 1 : 0,
            L.plus_repelling ? 1 : 0};
  });
}

pwl3_status pwl3_expand(const pwl3_params* params, int target, pwl3_expansion* out) {
  return guard([&] {
    need(out, "out");
    const pwl3::CanonicalParams p = to_cpp(params);
    pwl3::ExpansionCoeffs c;
    switch (target) {
      case PWL3_TARGET_PI_O_0: c = pwl3::expand_pi_o_0(p); break;
      case PWL3_TARGET_PI_BAR_O_INV_0: c = pwl3::expand_pi_bar_o_inv_0(p); break;
      case PWL3_TARGET_PI_PLUS_INV_BAR_0: c = pwl3::expand_pi_plus_inv_bar(p); break;
      case PWL3_TARGET_DISPLACEMENT_0: c = pwl3::displacement_expansion(p); break;
      default:
        throw pwl3::Error(pwl3::ErrorCode::kInvalidArgument, "expansion target out of range: " + std::to_string(target));
    }
    out->c0 = c.c0;
    out->c1 = c.c1;
    out->c2 = c.c2;
    out->order = c.order;
    out->series_value = c.evaluate(p.b2);
    out->numerical_value = pwl3::numerical_target(p, c.target);
  });
}

const char* pwl3_expansion_target_name(int target) {
  if (target < 0 || target > 3) return "unknown";
  return pwl3::expansion_target_name(static_cast<pwl3::ExpansionTarget>(target)).data();
}

pwl3_status pwl3_classify_sign(const pwl3_params* params, double gate, pwl3_sign_class* out) {
  return guard([&] {
    need(out, "out");
    const pwl3::SignClassification s = pwl3::classify_sign(to_cpp(params), gate);
    out->sign = s.sign == pwl3::SignClass::kAoStarGreater ? 1 : (s.sign == pwl3::SignClass::kAoStarLess ? -1 : 0);
    out->prop_case = s.prop_case;
    out->gamma_sum = s.gamma_sum;
    out->first_order = s.first_order;
    out->extrapolated = s.extrapolated ? 1 : 0;
  });
}

pwl3_status pwl3_landmark_difference_sign(const pwl3_params* params, int* out) {
  return guard([&] {
    need(out, "out");
    *out = pwl3::landmark_difference_sign(to_cpp(params));
  });
}

pwl3_status pwl3_return_map_eval(const pwl3_params* params, int kind, double v, double* value, double* derivative) {
  return guard([&] {
    need(value, "value");
    const pwl3::ReturnMap m(to_cpp(params), to_kind(kind));
    const pwl3::ReturnEval e = m.eval(v);
    *value = e.output;
    if (derivative) *derivative = e.derivative;
  });
}

pwl3_status pwl3_return_map_domain(const pwl3_params* params, int kind, double* lo, double* hi) {
  return guard([&] {
    need(lo, "lo");
    need(hi, "hi");
    const pwl3::ReturnMap m(to_cpp(params), to_kind(kind));
    *lo = m.domain_lo();
    *hi = m.domain_hi().value_or(INFINITY);
  });
}

void pwl3_scan_options_default(pwl3_scan_options* out) {
  if (out == nullptr) return;
  const pwl3::ScanOptions o;
  *out = {o.three_zone_samples, o.three_zone_max, o.three_zone_min_offset, o.two_zone_samples, o.root_tol};
}

pwl3_status pwl3_find_cycles(const pwl3_params* params, const pwl3_scan_options* options, pwl3_cycle_search** out) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    pwl3::ScanOptions o;
    if (options) {
      if (options->three_zone_samples < 2 || options->two_zone_samples < 2 || !(options->three_zone_max > 0.0) ||
          !(options->three_zone_min_offset > 0.0) || !(options->root_tol > 0.0)) {
        throw pwl3::Error(pwl3::ErrorCode::kInvalidArgument, "scan options out of range");
      }
      o = {options->three_zone_samples, options->three_zone_max, options->three_zone_min_offset,
           options->two_zone_samples, options->root_tol};
    }
    const pwl3::CanonicalParams p = to_cpp(params);
    *out = new pwl3_cycle_search{p, pwl3::find_cycles(p, o)};
  });
}

void pwl3_cycle_search_destroy(pwl3_cycle_search* search) { delete search; }

pwl3_status pwl3_cycle_search_info(const pwl3_cycle_search* search, pwl3_search_info* out) {
  return guard([&] {
    need(search, "search");
    need(out, "out");
    const pwl3::CycleSearch& s = search->search;
    *out = {};
    out->cycle_count = s.cycles.size();
    out->configuration = static_cast<int>(s.configuration);
    out->unproven_regime = s.unproven_regime ? 1 : 0;
    out->mirrored = s.mirrored ? 1 : 0;
    out->exhaustive = pwl3::CycleSearch::exhaustive ? 1 : 0;
    out->infinity_slope = s.infinity_slope;
    out->has_annulus = s.annulus ? 1 : 0;
    if (s.annulus) {
      out->is_center_config = s.annulus->is_center_config ? 1 : 0;
      out->annulus_displacement_sup = s.annulus->displacement_sup;
      out->annulus_outer_ordinate = s.annulus->outer_ordinate;
      out->annulus_samples = s.annulus->samples;
      out->annulus_failed_samples = s.annulus->failed_samples;
    }
    out->two_zone_scan_size = s.two_zone_scan.size();
    out->three_zone_scan_size = s.three_zone_scan.size();
  });
}

const char* pwl3_cycle_search_disclaimer(void) { return pwl3::CycleSearch::disclaimer.data(); }

pwl3_status pwl3_cycle_get(const pwl3_cycle_search* search, size_t index, pwl3_cycle_info* out) {
  return guard([&] {
    need(out, "out");
    const pwl3::LimitCycle& c = cycle_at(search, index);
    out->kind = c.kind == pwl3::LimitCycle::Kind::kTwoZone ? PWL3_CYCLE_TWO_ZONE : PWL3_CYCLE_THREE_ZONE;
    out->section = static_cast<int>(c.fixed_point.section);
    out->fixed_point = c.fixed_point.value;
    out->period = c.period;
    out->multiplier = c.multiplier;
    out->multiplier_fd = c.multiplier_fd;
    out->residual = c.residual;
    out->stability = static_cast<int>(c.stability);
    out->area_minus = c.areas.minus;
    out->area_central = c.areas.central;
    out->area_plus = c.areas.plus;
    out->green_residual = c.green_residual;
    out->green_scale = std::abs(c.traces[0]) * c.areas.minus + std::abs(c.traces[1]) * c.areas.central +
                       std::abs(c.traces[2]) * c.areas.plus;
    out->crossing_count = c.crossings.size();
    out->mirrored = c.mirrored ? 1 : 0;
  });
}

pwl3_status pwl3_cycle_crossings(const pwl3_cycle_search* search, size_t index, double* xy, size_t capacity,
                                 size_t* count) {
  return guard([&] { copy_points(cycle_at(search, index).crossings, xy, capacity, count); });
}

pwl3_status pwl3_cycle_polyline(const pwl3_cycle_search* search, size_t index, int n, double* xy, size_t capacity,
                                size_t* count) {
  return guard([&] {
    if (n < 8) throw pwl3::Error(pwl3::ErrorCode::kInvalidArgument, "polyline needs n >= 8");
    const pwl3::LimitCycle& c = cycle_at(search, index);
    copy_points(pwl3::cycle_polyline(search->params, c, n), xy, capacity, count);
  });
}

pwl3_status pwl3_cycle_oracle_closure(const pwl3_cycle_search* search, size_t index, double* out) {
  return guard([&] {
    need(out, "out");
    const pwl3::LimitCycle& c = cycle_at(search, index);
    *out = pwl3::oracle_closure(search->params, c);
  });
}

pwl3_status pwl3_cycle_search_scan(const pwl3_cycle_search* search, int which, size_t index, double* v,
                                   double* displacement, int* ok) {
  return guard([&] {
    need(search, "search");
    need(v, "v");
    need(displacement, "displacement");
    need(ok, "ok");
    if (which != 2 && which != 3) {
      throw pwl3::Error(pwl3::ErrorCode::kInvalidArgument, "scan selector must be 2 or 3");
    }
    const auto& table = which == 2 ? search->search.two_zone_scan : search->search.three_zone_scan;
    if (index >= table.size()) {
      throw pwl3::Error(pwl3::ErrorCode::kInvalidArgument, "scan index out of range: " + std::to_string(index));
    }
    *v = table[index].v;
    *displacement = table[index].displacement;
    *ok = table[index].ok ? 1 : 0;
  });
}

pwl3_status pwl3_annulus_polyline(const pwl3_cycle_search* search, int n, double* xy, size_t capacity,
                                  size_t* count) {
  return guard([&] {
    need(search, "search");
    if (!search->search.annulus) {
      throw pwl3::Error(pwl3::ErrorCode::kInvalidArgument, "search has no annulus report");
    }
    if (n < 8) throw pwl3::Error(pwl3::ErrorCode::kInvalidArgument, "polyline needs n >= 8");
    pwl3::LimitCycle shell;
    shell.legs = search->search.annulus->outer_boundary;
    copy_points(pwl3::cycle_polyline(search->params, shell, n), xy, capacity, count);
  });
}

const char* pwl3_configuration_name(int c) {
  if (c < 0 || c > 5) return "unknown";
  return pwl3::configuration_name(static_cast<pwl3::Configuration>(c)).data();
}

const char* pwl3_stability_name(int s) {
  if (s < 0 || s > 2) return "unknown";
  return pwl3::stability_name(static_cast<pwl3::Stability>(s)).data();
}

const char* pwl3_cycle_kind_name(int k) {
  if (k == PWL3_CYCLE_TWO_ZONE) return "two_zone";
  if (k == PWL3_CYCLE_THREE_ZONE) return "three_zone";
  return "unknown";
}

void pwl3_oracle_options_default(pwl3_oracle_options* out) {
  if (out == nullptr) return;
  const pwl3::StepControl c;
  *out = {c.abs_tol, c.rel_tol, c.initial_step, c.min_step, c.max_step, c.max_steps};
}

pwl3_status pwl3_integrate(const pwl3_params* params, double x0, double y0, double t_span, int backward,
                           const pwl3_oracle_options* options, pwl3_trajectory** out) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    pwl3::OracleOptions o;
    if (options) {
      o.control = {options->abs_tol,  options->rel_tol,  options->initial_step,
                   options->min_step, options->max_step, options->max_steps};
    }
    *out = new pwl3_trajectory{pwl3::integrate(to_cpp(params), {x0, y0}, t_span,
                                               backward ? pwl3::TimeSign::kBackward : pwl3::TimeSign::kForward, o)};
  });
}

void pwl3_trajectory_destroy(pwl3_trajectory* trajectory) { delete trajectory; }

size_t pwl3_trajectory_size(const pwl3_trajectory* trajectory) {
  return trajectory ? trajectory->tr.samples.size() : 0;
}

pwl3_status pwl3_trajectory_sample(const pwl3_trajectory* trajectory, size_t index, double* t, double* x, double* y,
                                   int* zone) {
  return guard([&] {
    need(trajectory, "trajectory");
    if (index >= trajectory->tr.samples.size()) {
      throw pwl3::Error(pwl3::ErrorCode::kInvalidArgument, "sample index out of range: " + std::to_string(index));
    }
    const pwl3::OracleSample& s = trajectory->tr.samples[index];
    if (t) *t = s.t;
    if (x) *x = s.p.x;
    if (y) *y = s.p.y;
    if (zone) *zone = static_cast<int>(s.zone);
  });
}

size_t pwl3_trajectory_event_count(const pwl3_trajectory* trajectory) {
  return trajectory ? trajectory->tr.events.size() : 0;
}

pwl3_status pwl3_trajectory_event(const pwl3_trajectory* trajectory, size_t index, double* t, double* x, double* y) {
  return guard([&] {
    need(trajectory, "trajectory");
    if (index >= trajectory->tr.events.size()) {
      throw pwl3::Error(pwl3::ErrorCode::kInvalidArgument, "event index out of range: " + std::to_string(index));
    }
    const pwl3::CrossingEvent& e = trajectory->tr.events[index];
    if (t) *t = e.time;
    if (x) *x = e.point.x;
    if (y) *y = e.point.y;
  });
}

pwl3_status pwl3_verify(const pwl3_params* params, uint64_t seed, int samples, double map_tol, double cycle_tol,
                        pwl3_verify_report** out) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    if (samples < 1) throw pwl3::Error(pwl3::ErrorCode::kInvalidArgument, "samples must be >= 1");
    *out = new pwl3_verify_report{pwl3::verify(to_cpp(params), seed, samples, map_tol, cycle_tol)};
  });
}

void pwl3_verify_report_destroy(pwl3_verify_report* report) { delete report; }

size_t pwl3_verify_map_count(const pwl3_verify_report* report) { return report ? report->report.maps.size() : 0; }

pwl3_status pwl3_verify_map(const pwl3_verify_report* report, size_t index, pwl3_map_check* out) {
  return guard([&] {
    need(report, "report");
    need(out, "out");
    if (index >= report->report.maps.size()) {
      throw pwl3::Error(pwl3::ErrorCode::kInvalidArgument, "map index out of range: " + std::to_string(index));
    }
    const pwl3::MapCheck& m = report->report.maps[index];
    *out = {static_cast<int>(m.map), m.samples, m.skipped, m.max_error, m.worst_input, m.lo, m.hi, m.passed ? 1 : 0};
  });
}

size_t pwl3_verify_cycle_count(const pwl3_verify_report* report) {
  return report ? report->report.cycles.size() : 0;
}

pwl3_status pwl3_verify_cycle(const pwl3_verify_report* report, size_t index, pwl3_cycle_check* out) {
  return guard([&] {
    need(report, "report");
    need(out, "out");
    if (index >= report->report.cycles.size()) {
      throw pwl3::Error(pwl3::ErrorCode::kInvalidArgument, "cycle index out of range: " + std::to_string(index));
    }
    const pwl3::CycleCheck& c = report->report.cycles[index];
    *out = {c.kind == pwl3::LimitCycle::Kind::kTwoZone ? PWL3_CYCLE_TWO_ZONE : PWL3_CYCLE_THREE_ZONE,
            c.fixed_point, c.closure, c.passed ? 1 : 0};
  });
}

int pwl3_verify_passed(const pwl3_verify_report* report) { return report && report->report.passed() ? 1 : 0; }

}  // extern "C"

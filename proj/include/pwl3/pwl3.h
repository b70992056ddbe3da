/* C interface of the pwl3 library. All functions are thread-safe for
 * distinct handles; the last error message is kept per thread. */
#ifndef PWL3_PWL3_H
#define PWL3_PWL3_H

#include <stddef.h>
#include <stdint.h>

#if defined(PWL3_BUILDING_LIBRARY)
#define PWL3_API __attribute__((visibility("default")))
#else
#define PWL3_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pwl3_status {
  PWL3_OK = 0,
  PWL3_E_INVALID_ARGUMENT = 1,
  PWL3_E_DEGENERATE_ZONE = 2,
  PWL3_E_NON_FOCUS_ZONE = 3,
  PWL3_E_NO_CROSSING = 4,
  PWL3_E_BRACKET_FAILURE = 5,
  PWL3_E_DOMAIN_ERROR = 6,
  PWL3_E_CONVERGENCE_ERROR = 7,
  PWL3_E_UNSUPPORTED_ZONE_TYPE = 8,
  PWL3_E_UNSUPPORTED_REGIME = 9,
  PWL3_E_MISSING_LANDMARK = 10,
  PWL3_E_NO_BRACKET = 11,
  PWL3_E_INCONCLUSIVE = 12,
  PWL3_E_INVALID_FAMILY = 13,
  PWL3_E_STEP_UNDERFLOW = 14,
  PWL3_E_TANGENTIAL = 15,
  PWL3_E_INTERNAL = 99
} pwl3_status;

/* Zones, indices of pwl3_classification.zones */
enum { PWL3_ZONE_MINUS = 0, PWL3_ZONE_CENTRAL = 1, PWL3_ZONE_PLUS = 2 };

/* Sections of the switching lines */
enum { PWL3_L_MINUS_O = 0, PWL3_L_MINUS_I = 1, PWL3_L_PLUS_I = 2, PWL3_L_PLUS_O = 3 };

/* Half-maps */
enum {
  PWL3_PI_MINUS = 0,
  PWL3_PI_O = 1,
  PWL3_PI_PLUS = 2,
  PWL3_PI_BAR_O = 3,
  PWL3_PI_O_RETURN = 4,
  PWL3_HALF_MAP_COUNT = 5
};

enum { PWL3_THREE_ZONE = 0, PWL3_TWO_ZONE_PLUS = 1 };
enum { PWL3_CYCLE_TWO_ZONE = 0, PWL3_CYCLE_THREE_ZONE = 1 };
enum { PWL3_ATTRACTING = 0, PWL3_REPELLING = 1, PWL3_NEUTRAL = 2 };
enum { PWL3_CONFIG_8A = 0, PWL3_CONFIG_8B, PWL3_CONFIG_9A, PWL3_CONFIG_9B, PWL3_CONFIG_UNDETERMINED, PWL3_CONFIG_CENTER };

/* Normal form x' = A x + B with A-, Ao, A+ fixed by these six scalars. */
typedef struct pwl3_params {
  double a11, a1, b2, d2, c11, f2;
} pwl3_params;

/* f2 = a1 c11 - ((c11 + a1) / a1)^2 - epsilon, a11 = -a1 */
typedef struct pwl3_family {
  double a1, c11, a11, d2, epsilon, b2;
} pwl3_family;

PWL3_API const char* pwl3_version(void);
/* Message of the last failed call on this thread ("" if none). */
PWL3_API const char* pwl3_last_error(void);
PWL3_API const char* pwl3_status_name(pwl3_status status);

PWL3_API pwl3_status pwl3_family_params(const pwl3_family* family, pwl3_params* out);
PWL3_API pwl3_status pwl3_mirror(const pwl3_params* params, pwl3_params* out);

/* ---- classification */

typedef struct pwl3_zone_info {
  double trace, det, alpha, beta, gamma;
  int complex_eigenvalues;
  double eq_x, eq_y;
  int locality; /* 0 real, 1 virtual, 2 on boundary */
} pwl3_zone_info;

typedef struct pwl3_classification {
  pwl3_zone_info zones[3];
  int h1, h2;
  int center_zone; /* PWL3_ZONE_CENTRAL when no side zone has a center */
  int table1_case; /* 0: b2<-1, 1: b2=-1, 2: |b2|<1, 3: b2=1, 4: b2>1 */
  double continuity_defect;
} pwl3_classification;

PWL3_API pwl3_status pwl3_classify(const pwl3_params* params, pwl3_classification* out);
PWL3_API const char* pwl3_zone_name(int zone);
PWL3_API const char* pwl3_locality_name(int locality);
PWL3_API const char* pwl3_table1_case_name(int table1_case);

/* ---- half-maps */

typedef struct pwl3_halfmaps pwl3_halfmaps;

typedef struct pwl3_map_eval {
  double input, output, flight_time, angle, derivative;
  int derivative_is_limit;
  int route; /* 0 parametric, 1 event */
} pwl3_map_eval;

PWL3_API pwl3_status pwl3_halfmaps_create(const pwl3_params* params, pwl3_halfmaps** out);
PWL3_API void pwl3_halfmaps_destroy(pwl3_halfmaps* maps);
PWL3_API int pwl3_halfmap_available(const pwl3_halfmaps* maps, int map);
/* Section units. The inverse fills input with the preimage of `output`. */
PWL3_API pwl3_status pwl3_halfmap_eval(const pwl3_halfmaps* maps, int map, double input, pwl3_map_eval* out);
PWL3_API pwl3_status pwl3_halfmap_inverse(const pwl3_halfmaps* maps, int map, double output, pwl3_map_eval* out);
/* Raw ordinates on the switching lines. */
PWL3_API pwl3_status pwl3_halfmap_eval_ordinate(const pwl3_halfmaps* maps, int map, double y_in,
                                                pwl3_map_eval* out);
PWL3_API const char* pwl3_halfmap_name(int map);
PWL3_API pwl3_status pwl3_halfmap_parse(const char* name, int* map);
PWL3_API const char* pwl3_section_name(int section);
PWL3_API int pwl3_halfmap_input_section(int map);
PWL3_API int pwl3_halfmap_output_section(int map);

/* Half-map by numerical integration only. */
PWL3_API pwl3_status pwl3_oracle_half_map(const pwl3_params* params, int map, double input, double* out);

typedef struct pwl3_landmarks {
  double a_o_star, b_o_star, a_plus_star;
  double b_plus_star, a_o_plus, c_star; /* valid when the has_ flag is set */
  int has_b_plus_star, has_a_o_plus, has_c_star;
  int plus_repelling;
} pwl3_landmarks;

PWL3_API pwl3_status pwl3_landmarks_compute(const pwl3_params* params, pwl3_landmarks* out);

/* ---- expansions near b2 = -1 */

enum { PWL3_TARGET_PI_O_0 = 0, PWL3_TARGET_PI_BAR_O_INV_0, PWL3_TARGET_PI_PLUS_INV_BAR_0, PWL3_TARGET_DISPLACEMENT_0 };

typedef struct pwl3_expansion {
  double c0, c1, c2; /* c2 is NaN when order < 2 */
  int order;
  double series_value; /* truncated series at the parameters' b2 */
  double numerical_value;
} pwl3_expansion;

PWL3_API pwl3_status pwl3_expand(const pwl3_params* params, int target, pwl3_expansion* out);
PWL3_API const char* pwl3_expansion_target_name(int target);

typedef struct pwl3_sign_class {
  int sign; /* +1: a_o* > a_o+, -1: a_o* < a_o+, 0 */
  char prop_case;
  double gamma_sum;
  double first_order;
  int extrapolated;
} pwl3_sign_class;

PWL3_API pwl3_status pwl3_classify_sign(const pwl3_params* params, double gate, pwl3_sign_class* out);
/* -sign(D) from the half-maps. */
PWL3_API pwl3_status pwl3_landmark_difference_sign(const pwl3_params* params, int* out);

/* ---- return maps and cycles */

PWL3_API pwl3_status pwl3_return_map_eval(const pwl3_params* params, int kind, double v, double* value,
                                          double* derivative);
PWL3_API pwl3_status pwl3_return_map_domain(const pwl3_params* params, int kind, double* lo, double* hi);

typedef struct pwl3_scan_options {
  int three_zone_samples;
  double three_zone_max;
  double three_zone_min_offset;
  int two_zone_samples;
  double root_tol;
} pwl3_scan_options;

PWL3_API void pwl3_scan_options_default(pwl3_scan_options* out);

typedef struct pwl3_cycle_search pwl3_cycle_search;

typedef struct pwl3_search_info {
  size_t cycle_count;
  int configuration;
  int unproven_regime;
  int mirrored;
  int exhaustive; /* always 0 */
  double infinity_slope;
  int has_annulus;
  int is_center_config;
  double annulus_displacement_sup;
  double annulus_outer_ordinate;
  int annulus_samples;
  int annulus_failed_samples;
  size_t two_zone_scan_size;
  size_t three_zone_scan_size;
} pwl3_search_info;

typedef struct pwl3_cycle_info {
  int kind;
  int section;
  double fixed_point;
  double period;
  double multiplier;
  double multiplier_fd;
  double residual;
  int stability;
  double area_minus, area_central, area_plus;
  double green_residual;
  double green_scale; /* |t-| S- + |to| So + |t+| S+ */
  size_t crossing_count;
  int mirrored;
} pwl3_cycle_info;

/* options may be NULL. */
PWL3_API pwl3_status pwl3_find_cycles(const pwl3_params* params, const pwl3_scan_options* options,
                                      pwl3_cycle_search** out);
PWL3_API void pwl3_cycle_search_destroy(pwl3_cycle_search* search);
PWL3_API pwl3_status pwl3_cycle_search_info(const pwl3_cycle_search* search, pwl3_search_info* out);
PWL3_API const char* pwl3_cycle_search_disclaimer(void);
PWL3_API pwl3_status pwl3_cycle_get(const pwl3_cycle_search* search, size_t index, pwl3_cycle_info* out);
/* Writes up to `capacity` points as x0, y0, x1, y1, ...; *count receives the total. */
PWL3_API pwl3_status pwl3_cycle_crossings(const pwl3_cycle_search* search, size_t index, double* xy,
                                          size_t capacity, size_t* count);
PWL3_API pwl3_status pwl3_cycle_polyline(const pwl3_cycle_search* search, size_t index, int n, double* xy,
                                         size_t capacity, size_t* count);
PWL3_API pwl3_status pwl3_cycle_oracle_closure(const pwl3_cycle_search* search, size_t index, double* out);
/* which: 2 two-zone scan, 3 three-zone scan */
PWL3_API pwl3_status pwl3_cycle_search_scan(const pwl3_cycle_search* search, int which, size_t index, double* v,
                                            double* displacement, int* ok);
/* Outer boundary of the period annulus (center configuration only). */
PWL3_API pwl3_status pwl3_annulus_polyline(const pwl3_cycle_search* search, int n, double* xy, size_t capacity,
                                           size_t* count);
PWL3_API const char* pwl3_configuration_name(int configuration);
PWL3_API const char* pwl3_stability_name(int stability);
PWL3_API const char* pwl3_cycle_kind_name(int kind);

/* ---- oracle trajectories */

typedef struct pwl3_trajectory pwl3_trajectory;

typedef struct pwl3_oracle_options {
  double abs_tol, rel_tol, initial_step, min_step, max_step;
  long max_steps;
} pwl3_oracle_options;

PWL3_API void pwl3_oracle_options_default(pwl3_oracle_options* out);
/* options may be NULL. */
PWL3_API pwl3_status pwl3_integrate(const pwl3_params* params, double x0, double y0, double t_span, int backward,
                                    const pwl3_oracle_options* options, pwl3_trajectory** out);
PWL3_API void pwl3_trajectory_destroy(pwl3_trajectory* trajectory);
PWL3_API size_t pwl3_trajectory_size(const pwl3_trajectory* trajectory);
PWL3_API pwl3_status pwl3_trajectory_sample(const pwl3_trajectory* trajectory, size_t index, double* t, double* x,
                                            double* y, int* zone);
PWL3_API size_t pwl3_trajectory_event_count(const pwl3_trajectory* trajectory);
PWL3_API pwl3_status pwl3_trajectory_event(const pwl3_trajectory* trajectory, size_t index, double* t, double* x,
                                           double* y);

/* ---- oracle verification */

typedef struct pwl3_verify_report pwl3_verify_report;

typedef struct pwl3_map_check {
  int map;
  int samples;
  int skipped;
  double max_error;
  double worst_input;
  double lo, hi;
  int passed;
} pwl3_map_check;

typedef struct pwl3_cycle_check {
  int kind;
  double fixed_point;
  double closure;
  int passed;
} pwl3_cycle_check;

PWL3_API pwl3_status pwl3_verify(const pwl3_params* params, uint64_t seed, int samples, double map_tol,
                                 double cycle_tol, pwl3_verify_report** out);
PWL3_API void pwl3_verify_report_destroy(pwl3_verify_report* report);
PWL3_API size_t pwl3_verify_map_count(const pwl3_verify_report* report);
PWL3_API pwl3_status pwl3_verify_map(const pwl3_verify_report* report, size_t index, pwl3_map_check* out);
PWL3_API size_t pwl3_verify_cycle_count(const pwl3_verify_report* report);
PWL3_API pwl3_status pwl3_verify_cycle(const pwl3_verify_report* report, size_t index, pwl3_cycle_check* out);
PWL3_API int pwl3_verify_passed(const pwl3_verify_report* report);

#ifdef __cplusplus
}
#endif

#endif /* PWL3_PWL3_H */

#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "output.hpp"

namespace pwl3cli {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw CliError(PWL3_E_INVALID_ARGUMENT, msg); }

struct SearchDeleter {
  void operator()(pwl3_cycle_search* s) const { pwl3_cycle_search_destroy(s); }
};
struct TrajectoryDeleter {
  void operator()(pwl3_trajectory* t) const { pwl3_trajectory_destroy(t); }
};
struct MapsDeleter {
  void operator()(pwl3_halfmaps* m) const { pwl3_halfmaps_destroy(m); }
};
struct ReportDeleter {
  void operator()(pwl3_verify_report* r) const { pwl3_verify_report_destroy(r); }
};
using SearchPtr = std::unique_ptr<pwl3_cycle_search, SearchDeleter>;
using TrajectoryPtr = std::unique_ptr<pwl3_trajectory, TrajectoryDeleter>;
using MapsPtr = std::unique_ptr<pwl3_halfmaps, MapsDeleter>;
using ReportPtr = std::unique_ptr<pwl3_verify_report, ReportDeleter>;

bool wants_csv(const RunOptions& o) { return o.format == "csv" || o.format == "both"; }
bool wants_svg(const RunOptions& o) { return o.format == "svg" || o.format == "both"; }

void require_out_for_svg(const RunOptions& o) {
  if (wants_svg(o) && o.out_dir.empty()) bad("--format " + o.format + " needs --out DIR");
}

std::ofstream open_file(const RunOptions& o, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(o.out_dir, ec);
  if (ec) bad("cannot create output directory '" + o.out_dir + "': " + ec.message());
  const std::string path = (std::filesystem::path(o.out_dir) / name).string();
  std::ofstream f(path, std::ios::binary);
  if (!f) bad("cannot write '" + path + "'");
  return f;
}

/// Primary CSV product: stdout without --out, otherwise DIR/name.
template <class Fn>
void emit_csv(const RunOptions& o, const std::string& name, Fn&& write) {
  if (o.out_dir.empty()) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream f = open_file(o, name);
  write(f);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// Raw ordinate per unit of section coordinate.
double section_scale(int section, double b2) {
  switch (section) {
    case PWL3_L_MINUS_O: return 1.0 - b2;
    case PWL3_L_MINUS_I: return b2 - 1.0;
    case PWL3_L_PLUS_I: return b2 + 1.0;
    default: return -(b2 + 1.0);
  }
}

pwl3_scan_options scan_options(const RunOptions& o) {
  pwl3_scan_options s;
  pwl3_scan_options_default(&s);
  const Json& c = o.config;
  s.three_zone_samples = static_cast<int>(integer_or(c, "cycles", "samples", s.three_zone_samples));
  s.three_zone_max = number_or(c, "cycles", "max", s.three_zone_max);
  s.two_zone_samples = static_cast<int>(integer_or(c, "cycles", "two_zone_samples", s.two_zone_samples));
  if (o.tol) s.root_tol = *o.tol;
  if (s.three_zone_samples < 2 || s.two_zone_samples < 2) bad("config key 'cycles.samples': need at least 2 samples");
  if (!(s.three_zone_max > 1.0)) bad("config key 'cycles.max': must exceed 1");
  return s;
}

std::vector<double> xy_buffer(size_t points) { return std::vector<double>(2 * points); }

Polyline cycle_points(const pwl3_cycle_search* search, size_t index, int n) {
  std::vector<double> xy = xy_buffer(static_cast<size_t>(n));
  size_t count = 0;
  check(pwl3_cycle_polyline(search, index, n, xy.data(), xy.size() / 2, &count));
  Polyline p{"cycle", {}, {}};
  for (size_t i = 0; i < std::min(count, xy.size() / 2); ++i) {
    p.x.push_back(xy[2 * i]);
    p.y.push_back(xy[2 * i + 1]);
  }
  return p;
}

struct Orbit {
  std::string kind;
  std::vector<double> t, x, y;
  std::vector<int> zone;
};

Orbit integrate_orbit(const pwl3_params& p, double x0, double y0, double t_span, const std::string& kind) {
  pwl3_trajectory* raw = nullptr;
  check(pwl3_integrate(&p, x0, y0, t_span, 0, nullptr, &raw));
  TrajectoryPtr traj(raw);
  Orbit o;
  o.kind = kind;
  const size_t n = pwl3_trajectory_size(traj.get());
  for (size_t i = 0; i < n; ++i) {
    double t, x, y;
    int z;
    check(pwl3_trajectory_sample(traj.get(), i, &t, &x, &y, &z));
    o.t.push_back(t);
    o.x.push_back(x);
    o.y.push_back(y);
    o.zone.push_back(z);
  }
  return o;
}

/// Cuts a closed orbit started on x = x0 at its first return to the start.
void cut_at_return(const pwl3_params& p, Orbit& o, double t_span) {
  pwl3_trajectory* raw = nullptr;
  check(pwl3_integrate(&p, o.x.front(), o.y.front(), t_span, 0, nullptr, &raw));
  TrajectoryPtr traj(raw);
  const double x0 = o.x.front();
  const double y0 = o.y.front();
  const size_t events = pwl3_trajectory_event_count(traj.get());
  for (size_t i = 0; i < events; ++i) {
    double t, x, y;
    check(pwl3_trajectory_event(traj.get(), i, &t, &x, &y));
    if (t > 0.0 && x == x0 && std::fabs(y - y0) <= 1e-6 * std::max(1.0, std::fabs(y0))) {
      size_t keep = 0;
      while (keep < o.t.size() && o.t[keep] < t) ++keep;
      o.t.resize(keep);
      o.x.resize(keep);
      o.y.resize(keep);
      o.zone.resize(keep);
      o.t.push_back(t);
      o.x.push_back(x);
      o.y.push_back(y);
      o.zone.push_back(o.zone.empty() ? PWL3_ZONE_CENTRAL : o.zone.back());
      return;
    }
  }
}

struct PointResult {
  std::string status = "ok";
  pwl3_params params{};
  int table1 = -1;
  int h1 = 0, h2 = 0;
  int configuration = -1;
  long cycles = 0;
  double two_fp = NAN, two_mult = NAN, three_fp = NAN, three_mult = NAN;
  int two_stab = -1, three_stab = -1;
  double landmark_diff = NAN;
  int predicted_sign = 0;
  char prop_case = '-';
  bool has_prediction = false;
};

void set_family_value(pwl3_family& f, const std::string& name, double v) {
  if (name == "a1") f.a1 = v;
  else if (name == "c11") f.c11 = v;
  else if (name == "a11") f.a11 = v;
  else if (name == "d2") f.d2 = v;
  else if (name == "epsilon") f.epsilon = v;
  else if (name == "b2") f.b2 = v;
  else bad("grid axis '" + name + "': not a family key (a1, c11, a11, d2, epsilon, b2)");
}

PointResult sweep_point(const pwl3_family& fam, const pwl3_scan_options& scan) {
  PointResult r;
  if (pwl3_family_params(&fam, &r.params) != PWL3_OK) {
    r.status = "inadmissible";
    return r;
  }
  pwl3_classification c;
  if (pwl3_classify(&r.params, &c) != PWL3_OK) {
    r.status = "inadmissible";
    return r;
  }
  r.table1 = c.table1_case;
  r.h1 = c.h1;
  r.h2 = c.h2;
  pwl3_landmarks lm;
  if (pwl3_landmarks_compute(&r.params, &lm) == PWL3_OK && lm.has_a_o_plus) {
    r.landmark_diff = lm.a_o_star - lm.a_o_plus;
  }
  pwl3_sign_class sc;
  if (pwl3_classify_sign(&r.params, 0.2, &sc) == PWL3_OK) {
    r.has_prediction = true;
    r.predicted_sign = sc.sign;
    r.prop_case = sc.prop_case;
  }
  pwl3_cycle_search* raw = nullptr;
  const pwl3_status s = pwl3_find_cycles(&r.params, &scan, &raw);
  if (s == PWL3_E_NO_BRACKET) {
    r.status = "no_sign_change";
    return r;
  }
  if (s == PWL3_E_UNSUPPORTED_REGIME) {
    r.status = "unsupported";
    return r;
  }
  if (s != PWL3_OK) {
    r.status = pwl3_status_name(s);
    return r;
  }
  SearchPtr search(raw);
  pwl3_search_info info;
  check(pwl3_cycle_search_info(search.get(), &info));
  r.configuration = info.configuration;
  r.cycles = static_cast<long>(info.cycle_count);
  if (info.is_center_config) r.status = "center";
  for (size_t i = 0; i < info.cycle_count; ++i) {
    pwl3_cycle_info ci;
    check(pwl3_cycle_get(search.get(), i, &ci));
    if (ci.kind == PWL3_CYCLE_TWO_ZONE && std::isnan(r.two_fp)) {
      r.two_fp = ci.fixed_point;
      r.two_mult = ci.multiplier;
      r.two_stab = ci.stability;
    } else if (ci.kind == PWL3_CYCLE_THREE_ZONE && std::isnan(r.three_fp)) {
      r.three_fp = ci.fixed_point;
      r.three_mult = ci.multiplier;
      r.three_stab = ci.stability;
    }
  }
  return r;
}

std::string stab_name(int s) { return s < 0 ? "-" : pwl3_stability_name(s); }

}  // namespace

int cmd_classify(const RunOptions& o) {
  const pwl3_params p = params_from(o.config);
  pwl3_classification c;
  check(pwl3_classify(&p, &c));
  std::cout << "case: " << pwl3_table1_case_name(c.table1_case) << "\n";
  std::cout << "H1 (central focus): " << (c.h1 ? "true" : "false") << "\n";
  std::cout << "H2 (side center and focus of opposite stability): " << (c.h2 ? "true" : "false") << "\n";
  std::cout << "continuity defect: " << num(c.continuity_defect) << "\n";
  Json record = {{"case", pwl3_table1_case_name(c.table1_case)},
                 {"h1", static_cast<bool>(c.h1)},
                 {"h2", static_cast<bool>(c.h2)},
                 {"continuity_defect", c.continuity_defect},
                 {"params", {{"a11", p.a11}, {"a1", p.a1}, {"b2", p.b2}, {"d2", p.d2}, {"c11", p.c11}, {"f2", p.f2}}},
                 {"zones", Json::array()}};
  for (int z = 0; z < 3; ++z) {
    const pwl3_zone_info& zi = c.zones[z];
    std::cout << pwl3_zone_name(z) << ": trace " << num(zi.trace) << ", det " << num(zi.det);
    if (zi.complex_eigenvalues) {
      std::cout << ", eigenvalues " << num(zi.alpha) << " +- " << num(zi.beta) << "i, gamma " << num(zi.gamma);
    }
    std::cout << ", equilibrium (" << num(zi.eq_x) << ", " << num(zi.eq_y) << ") "
              << pwl3_locality_name(zi.locality) << "\n";
    Json zj = {{"zone", pwl3_zone_name(z)},
               {"trace", zi.trace},
               {"det", zi.det},
               {"complex", static_cast<bool>(zi.complex_eigenvalues)},
               {"equilibrium", {zi.eq_x, zi.eq_y}},
               {"locality", pwl3_locality_name(zi.locality)}};
    if (zi.complex_eigenvalues) {
      zj["alpha"] = zi.alpha;
      zj["beta"] = zi.beta;
      zj["gamma"] = zi.gamma;
    }
    record["zones"].push_back(zj);
  }
  if (c.center_zone != PWL3_ZONE_CENTRAL) std::cout << "center: " << pwl3_zone_name(c.center_zone) << "\n";
  record["center_zone"] = c.center_zone == PWL3_ZONE_CENTRAL ? Json(nullptr) : Json(pwl3_zone_name(c.center_zone));
  std::cout << "record: " << record.dump() << "\n";
  if (!o.out_dir.empty()) {
    std::ofstream f = open_file(o, "classify.json");
    f << record.dump(2) << "\n";
  }
  return 0;
}

int cmd_map(const RunOptions& o) {
  const pwl3_params p = params_from(o.config);
  const std::string name = string_or(o.config, "map", "name", "pi_plus");
  int map = 0;
  check(pwl3_halfmap_parse(name.c_str(), &map));
  const std::string units = string_or(o.config, "map", "units", "section");
  if (units != "section" && units != "ordinate") bad("config key 'map.units': expected 'section' or 'ordinate'");
  const bool oracle = bool_or(o.config, "map", "oracle", false);
  std::vector<double> inputs;
  if (o.grid) {
    const Grid g = parse_grid(*o.grid);
    if (g.axes.size() != 1) bad("--grid for map takes one axis, e.g. v=0:10:101");
    inputs = g.axes[0].values();
  } else if (o.config.contains("map") && o.config["map"].contains("inputs")) {
    inputs = o.config["map"]["inputs"].get<std::vector<double>>();
  } else {
    bad("config key 'map.inputs': missing (or give --grid v=lo:hi:n)");
  }
  if (wants_svg(o) && o.format == "svg") bad("map writes CSV only");
  MapsPtr maps;
  {
    pwl3_halfmaps* raw = nullptr;
    check(pwl3_halfmaps_create(&p, &raw));
    maps.reset(raw);
  }
  if (!pwl3_halfmap_available(maps.get(), map)) {
    throw CliError(PWL3_E_UNSUPPORTED_REGIME, std::string(pwl3_halfmap_name(map)) + " is not available for these parameters");
  }
  const double in_scale = section_scale(pwl3_halfmap_input_section(map), p.b2);
  const double out_scale = section_scale(pwl3_halfmap_output_section(map), p.b2);
  emit_csv(o, "map.csv", [&](std::ostream& os) {
    CsvWriter w(os, "map", o.config,
                {std::string("map: ") + pwl3_halfmap_name(map) + " " + pwl3_section_name(pwl3_halfmap_input_section(map)) +
                 " -> " + pwl3_section_name(pwl3_halfmap_output_section(map)) + ", units: " + units});
    std::vector<std::string> cols{"input", "output", "tau", "derivative", "status"};
    if (oracle) {
      cols.push_back("oracle_output");
      cols.push_back("oracle_error");
    }
    w.header(cols);
    for (double v : inputs) {
      pwl3_map_eval e{};
      const pwl3_status s = units == "section" ? pwl3_halfmap_eval(maps.get(), map, v, &e)
                                               : pwl3_halfmap_eval_ordinate(maps.get(), map, v, &e);
      if (s != PWL3_OK) {
        w.cell(v).cell(NAN).cell(NAN).cell(NAN).cell(std::string(pwl3_status_name(s)));
        if (oracle) w.cell(NAN).cell(NAN);
        w.end_row();
        continue;
      }
      w.cell(v).cell(e.output).cell(e.flight_time).cell(e.derivative).cell(std::string("ok"));
      if (oracle) {
        const double section_in = units == "section" ? v : v / in_scale;
        double y = NAN;
        if (pwl3_oracle_half_map(&p, map, section_in, &y) == PWL3_OK) {
          if (units == "ordinate") y *= out_scale;
          w.cell(y).cell(std::fabs(y - e.output));
        } else {
          w.cell(NAN).cell(NAN);
        }
      }
      w.end_row();
    }
  });
  return 0;
}

int cmd_cycles(const RunOptions& o) {
  require_out_for_svg(o);
  const pwl3_params p = params_from(o.config);
  const pwl3_scan_options scan = scan_options(o);
  const int poly_n = static_cast<int>(integer_or(o.config, "cycles", "polyline_points", 2000));
  if (poly_n < 8) bad("config key 'cycles.polyline_points': need at least 8 points");
  pwl3_cycle_search* raw = nullptr;
  check(pwl3_find_cycles(&p, &scan, &raw));
  SearchPtr search(raw);
  pwl3_search_info info;
  check(pwl3_cycle_search_info(search.get(), &info));

  std::cout << "configuration: " << pwl3_configuration_name(info.configuration)
            << (info.unproven_regime ? " (outside the proven regime)" : "") << (info.mirrored ? ", mirrored" : "")
            << "\n";
  std::cout << "note: " << pwl3_cycle_search_disclaimer() << "\n";
  if (info.has_annulus && info.is_center_config) {
    std::cout << "period annulus: no isolated limit cycles; inner boundary (1, 0), outer orbit through (1, "
              << num(info.annulus_outer_ordinate) << "), max |P(y) - y| = " << num(info.annulus_displacement_sup)
              << " over " << info.annulus_samples << " orbits\n";
  } else {
    std::cout << "infinity slope: " << num(info.infinity_slope) << "\n";
  }
  std::vector<pwl3_cycle_info> rows(info.cycle_count);
  std::printf("%-10s %-6s %-20s %-20s %-20s %-11s %-20s\n", "kind", "section", "fixed_point", "period", "multiplier",
              "stability", "green_residual");
  for (size_t i = 0; i < info.cycle_count; ++i) {
    check(pwl3_cycle_get(search.get(), i, &rows[i]));
    const pwl3_cycle_info& c = rows[i];
    std::printf("%-10s %-6s %-20.14g %-20.14g %-20.14g %-11s %-20.3g\n", pwl3_cycle_kind_name(c.kind),
                pwl3_section_name(c.section), c.fixed_point, c.period, c.multiplier, pwl3_stability_name(c.stability),
                c.green_residual);
  }
  std::fflush(stdout);
  if (o.out_dir.empty()) return 0;

  std::vector<Polyline> lines;
  for (size_t i = 0; i < info.cycle_count; ++i) lines.push_back(cycle_points(search.get(), i, poly_n));
  if (info.has_annulus && info.is_center_config) {
    std::vector<double> xy = xy_buffer(static_cast<size_t>(poly_n));
    size_t count = 0;
    check(pwl3_annulus_polyline(search.get(), poly_n, xy.data(), xy.size() / 2, &count));
    Polyline a{"annulus_outer", {}, {}};
    for (size_t i = 0; i < std::min(count, xy.size() / 2); ++i) {
      a.x.push_back(xy[2 * i]);
      a.y.push_back(xy[2 * i + 1]);
    }
    lines.push_back(a);
  }
  if (wants_csv(o)) {
    std::ofstream f = open_file(o, "cycles.csv");
    CsvWriter w(f, "cycles", o.config,
                {std::string("configuration: ") + pwl3_configuration_name(info.configuration),
                 std::string("note: ") + pwl3_cycle_search_disclaimer()});
    w.header({"index", "kind", "section", "fixed_point", "period", "multiplier", "multiplier_fd", "residual",
              "stability", "area_minus", "area_central", "area_plus", "green_residual", "green_scale"});
    for (size_t i = 0; i < rows.size(); ++i) {
      const pwl3_cycle_info& c = rows[i];
      w.cell(static_cast<long>(i))
          .cell(std::string(pwl3_cycle_kind_name(c.kind)))
          .cell(std::string(pwl3_section_name(c.section)))
          .cell(c.fixed_point)
          .cell(c.period)
          .cell(c.multiplier)
          .cell(c.multiplier_fd)
          .cell(c.residual)
          .cell(std::string(pwl3_stability_name(c.stability)))
          .cell(c.area_minus)
          .cell(c.area_central)
          .cell(c.area_plus)
          .cell(c.green_residual)
          .cell(c.green_scale);
      w.end_row();
    }
    std::ofstream g = open_file(o, "cycles_polylines.csv");
    CsvWriter pw(g, "cycles", o.config);
    pw.header({"curve", "kind", "x", "y"});
    for (size_t i = 0; i < lines.size(); ++i) {
      for (size_t k = 0; k < lines[i].x.size(); ++k) {
        pw.cell(static_cast<long>(i)).cell(lines[i].kind).cell(lines[i].x[k]).cell(lines[i].y[k]);
        pw.end_row();
      }
    }
  }
  if (wants_svg(o)) {
    std::ofstream f = open_file(o, "cycles.svg");
    write_svg(f, lines, fit_window(lines), "limit cycles");
  }
  return 0;
}

int cmd_sweep(const RunOptions& o) {
  if (o.format != "csv") bad("sweep writes CSV only");
  const pwl3_family base = family_from(o.config);
  std::string spec;
  if (o.grid) spec = *o.grid;
  else spec = string_or(o.config, "sweep", "grid", "");
  if (spec.empty()) bad("config key 'sweep.grid': missing (or give --grid)");
  const Grid grid = parse_grid(spec);
  for (const Axis& a : grid.axes) {
    pwl3_family probe = base;
    set_family_value(probe, a.name, a.lo);
  }
  const pwl3_scan_options scan = scan_options(o);

  std::vector<std::vector<double>> values;
  size_t total = 1;
  for (const Axis& a : grid.axes) {
    values.push_back(a.values());
    total *= values.back().size();
  }
  std::vector<pwl3_family> fams(total, base);
  for (size_t idx = 0; idx < total; ++idx) {
    size_t rest = idx;
    for (size_t k = grid.axes.size(); k-- > 0;) {
      const size_t n = values[k].size();
      set_family_value(fams[idx], grid.axes[k].name, values[k][rest % n]);
      rest /= n;
    }
  }

  long threads = integer_or(o.config, "sweep", "threads", 0);
  if (threads < 0) bad("config key 'sweep.threads': must be >= 0");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<long>(threads, static_cast<long>(total));

  std::vector<PointResult> results(total);
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (long t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < total; i = next++) {
        try {
          results[i] = sweep_point(fams[i], scan);
        } catch (const std::exception& e) {
          results[i].status = "error";
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();

  emit_csv(o, "sweep.csv", [&](std::ostream& os) {
    CsvWriter w(os, "sweep", o.config, {"grid: " + spec});
    std::vector<std::string> cols{"index", "a1", "c11", "a11", "d2", "epsilon", "b2", "f2", "status", "case", "h1",
                                  "h2", "configuration", "cycles", "two_zone_fixed_point", "two_zone_multiplier",
                                  "two_zone_stability", "three_zone_fixed_point", "three_zone_multiplier",
                                  "three_zone_stability", "landmark_difference", "predicted_sign", "prop_case"};
    w.header(cols);
    for (size_t i = 0; i < total; ++i) {
      const pwl3_family& f = fams[i];
      const PointResult& r = results[i];
      w.cell(static_cast<long>(i)).cell(f.a1).cell(f.c11).cell(f.a11).cell(f.d2).cell(f.epsilon).cell(f.b2);
      w.cell(r.status == "inadmissible" ? NAN : r.params.f2).cell(r.status);
      w.cell(std::string(r.table1 < 0 ? "-" : pwl3_table1_case_name(r.table1)));
      w.cell(static_cast<long>(r.h1)).cell(static_cast<long>(r.h2));
      w.cell(std::string(r.configuration < 0 ? "-" : pwl3_configuration_name(r.configuration)));
      w.cell(r.cycles).cell(r.two_fp).cell(r.two_mult).cell(stab_name(r.two_stab));
      w.cell(r.three_fp).cell(r.three_mult).cell(stab_name(r.three_stab)).cell(r.landmark_diff);
      w.cell(r.has_prediction ? std::to_string(r.predicted_sign) : std::string("-"));
      w.cell(std::string(1, r.prop_case));
      w.end_row();
    }
  });
  return 0;
}

int cmd_portrait(const RunOptions& o) {
  require_out_for_svg(o);
  const pwl3_params p = params_from(o.config);
  const double t_span = number_or(o.config, "portrait", "t_span", 30.0);
  if (!(t_span > 0.0)) bad("config key 'portrait.t_span': must be positive");
  const long annulus_orbits = integer_or(o.config, "portrait", "annulus_orbits", 8);
  if (annulus_orbits < 0) bad("config key 'portrait.annulus_orbits': must be >= 0");
  const bool include_cycles = bool_or(o.config, "portrait", "include_cycles", true);

  std::vector<Orbit> orbits;
  std::vector<std::string> notes;
  if (o.config.contains("portrait") && o.config["portrait"].contains("seeds")) {
    for (const Json& s : o.config["portrait"]["seeds"]) {
      orbits.push_back(integrate_orbit(p, s[0].get<double>(), s[1].get<double>(), t_span, "orbit"));
    }
  }
  if (include_cycles && std::fabs(p.b2) >= 1.0) {
    const pwl3_scan_options scan = scan_options(o);
    pwl3_cycle_search* raw = nullptr;
    const pwl3_status s = pwl3_find_cycles(&p, &scan, &raw);
    if (s != PWL3_OK) {
      notes.push_back(std::string("cycle search: ") + pwl3_status_name(s));
    } else {
      SearchPtr search(raw);
      pwl3_search_info info;
      check(pwl3_cycle_search_info(search.get(), &info));
      for (size_t i = 0; i < info.cycle_count; ++i) {
        pwl3_cycle_info ci;
        check(pwl3_cycle_get(search.get(), i, &ci));
        double xy[2];
        size_t count = 0;
        check(pwl3_cycle_crossings(search.get(), i, xy, 1, &count));
        orbits.push_back(integrate_orbit(p, xy[0], xy[1], ci.period, "cycle"));
      }
      if (info.has_annulus && info.is_center_config) {
        const double outer = info.annulus_outer_ordinate;
        const double span = std::max(t_span, 100.0);
        for (long k = 1; k <= annulus_orbits; ++k) {
          Orbit a = integrate_orbit(p, 1.0, outer * static_cast<double>(k) / static_cast<double>(annulus_orbits + 1),
                                    span, "annulus");
          cut_at_return(p, a, span);
          orbits.push_back(std::move(a));
        }
        Orbit outer_orbit = integrate_orbit(p, 1.0, outer, span, "annulus_outer");
        cut_at_return(p, outer_orbit, span);
        orbits.push_back(std::move(outer_orbit));
        notes.push_back("period annulus between (1, 0) and the orbit through (1, " + fmt(outer) + ")");
      }
    }
  }
  if (wants_csv(o)) {
    emit_csv(o, "portrait.csv", [&](std::ostream& os) {
      CsvWriter w(os, "portrait", o.config, notes);
      w.header({"orbit", "kind", "t", "x", "y", "zone"});
      for (size_t i = 0; i < orbits.size(); ++i) {
        const Orbit& ob = orbits[i];
        for (size_t k = 0; k < ob.t.size(); ++k) {
          w.cell(static_cast<long>(i)).cell(ob.kind).cell(ob.t[k]).cell(ob.x[k]).cell(ob.y[k]);
          w.cell(std::string(pwl3_zone_name(ob.zone[k])));
          w.end_row();
        }
      }
    });
  }
  if (wants_svg(o)) {
    std::vector<Polyline> lines;
    for (const Orbit& ob : orbits) lines.push_back({ob.kind, ob.x, ob.y});
    Window win = fit_window(lines);
    if (o.config.contains("portrait") && o.config["portrait"].contains("window")) {
      const Json& wj = o.config["portrait"]["window"];
      win = {wj[0].get<double>(), wj[1].get<double>(), wj[2].get<double>(), wj[3].get<double>()};
    }
    std::ofstream f = open_file(o, "portrait.svg");
    write_svg(f, lines, win, "phase portrait");
  }
  return 0;
}

int cmd_verify(const RunOptions& o) {
  if (o.format != "csv") bad("verify writes CSV only");
  const pwl3_params p = params_from(o.config);
  const long samples = integer_or(o.config, "verify", "samples", 100);
  if (samples < 1) bad("config key 'verify.samples': must be >= 1");
  const double map_tol = check_tol(o.tol ? *o.tol : number_or(o.config, "verify", "map_tol", 1e-7), "map tolerance");
  const double cycle_tol = check_tol(number_or(o.config, "verify", "cycle_tol", 1e-6), "config key 'verify.cycle_tol'");
  const long seed_cfg = integer_or(o.config, "verify", "seed", 1);
  if (seed_cfg < 0) bad("config key 'verify.seed': must be >= 0");
  const std::uint64_t seed = o.seed ? *o.seed : static_cast<std::uint64_t>(seed_cfg);
  pwl3_verify_report* raw = nullptr;
  check(pwl3_verify(&p, seed, static_cast<int>(samples), map_tol, cycle_tol, &raw));
  ReportPtr report(raw);

  const size_t nm = pwl3_verify_map_count(report.get());
  const size_t nc = pwl3_verify_cycle_count(report.get());
  std::vector<pwl3_map_check> maps(nm);
  std::vector<pwl3_cycle_check> cycles(nc);
  std::printf("%-12s %-12s %-12s %-8s %-8s %-12s %-6s\n", "map", "lo", "hi", "samples", "skipped", "max_error", "result");
  int failed = 0;
  for (size_t i = 0; i < nm; ++i) {
    check(pwl3_verify_map(report.get(), i, &maps[i]));
    const pwl3_map_check& m = maps[i];
    failed += !m.passed;
    std::printf("%-12s %-12.6g %-12.6g %-8d %-8d %-12.3e %-6s\n", pwl3_halfmap_name(m.map), m.lo, m.hi, m.samples,
                m.skipped, m.max_error, m.passed ? "pass" : "FAIL");
  }
  std::printf("%-12s %-25s %-12s %-6s\n", "cycle", "fixed_point", "closure", "result");
  for (size_t i = 0; i < nc; ++i) {
    check(pwl3_verify_cycle(report.get(), i, &cycles[i]));
    const pwl3_cycle_check& c = cycles[i];
    failed += !c.passed;
    std::printf("%-12s %-25.17g %-12.3e %-6s\n", pwl3_cycle_kind_name(c.kind), c.fixed_point, c.closure,
                c.passed ? "pass" : "FAIL");
  }
  std::printf("tolerances: maps %.3g, cycles %.3g; %s\n", map_tol, cycle_tol, failed ? "FAILED" : "all passed");
  std::fflush(stdout);
  if (!o.out_dir.empty()) {
    std::ofstream f = open_file(o, "verify.csv");
    CsvWriter w(f, "verify", o.config, {"seed: " + std::to_string(seed)});
    w.header({"check", "name", "lo", "hi", "samples", "skipped", "error", "tolerance", "passed"});
    for (const pwl3_map_check& m : maps) {
      w.cell(std::string("map")).cell(std::string(pwl3_halfmap_name(m.map))).cell(m.lo).cell(m.hi);
      w.cell(static_cast<long>(m.samples)).cell(static_cast<long>(m.skipped)).cell(m.max_error).cell(map_tol);
      w.cell(static_cast<long>(m.passed));
      w.end_row();
    }
    for (const pwl3_cycle_check& c : cycles) {
      w.cell(std::string("cycle")).cell(std::string(pwl3_cycle_kind_name(c.kind))).cell(c.fixed_point).cell(c.fixed_point);
      w.cell(1L).cell(0L).cell(c.closure).cell(cycle_tol).cell(static_cast<long>(c.passed));
      w.end_row();
    }
  }
  if (failed) {
    std::cerr << "error: VerificationFailed: " << failed << " check(s) above tolerance\n";
    return kVerifyFailed;
  }
  return 0;
}

}  // namespace pwl3cli

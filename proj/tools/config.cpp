#include "config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace pwl3cli {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw CliError(PWL3_E_INVALID_ARGUMENT, msg); }

double parse_number(const std::string& s, const std::string& what) {
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    bad(what + ": not a number: '" + s + "'");
  }
  if (used != s.size()) bad(what + ": not a number: '" + s + "'");
  if (!std::isfinite(v)) bad(what + ": not finite: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

enum class Kind { kNumber, kInteger, kBool, kString, kNumberArray, kPointArray, kWindow };

struct KeySpec {
  Kind kind;
  bool required;
};

using Section = std::map<std::string, KeySpec>;

const std::map<std::string, Section>& schema() {
  static const std::map<std::string, Section> s = {
      {"params",
       {{"a11", {Kind::kNumber, true}},
        {"a1", {Kind::kNumber, true}},
        {"b2", {Kind::kNumber, true}},
        {"d2", {Kind::kNumber, true}},
        {"c11", {Kind::kNumber, true}},
        {"f2", {Kind::kNumber, true}}}},
      {"family",
       {{"a1", {Kind::kNumber, true}},
        {"c11", {Kind::kNumber, true}},
        {"a11", {Kind::kNumber, false}},
        {"d2", {Kind::kNumber, true}},
        {"epsilon", {Kind::kNumber, true}},
        {"b2", {Kind::kNumber, true}}}},
      {"map",
       {{"name", {Kind::kString, false}},
        {"inputs", {Kind::kNumberArray, false}},
        {"units", {Kind::kString, false}},
        {"oracle", {Kind::kBool, false}}}},
      {"cycles",
       {{"samples", {Kind::kInteger, false}},
        {"max", {Kind::kNumber, false}},
        {"two_zone_samples", {Kind::kInteger, false}},
        {"polyline_points", {Kind::kInteger, false}}}},
      {"sweep", {{"threads", {Kind::kInteger, false}}, {"grid", {Kind::kString, false}}}},
      {"portrait",
       {{"seeds", {Kind::kPointArray, false}},
        {"t_span", {Kind::kNumber, false}},
        {"annulus_orbits", {Kind::kInteger, false}},
        {"window", {Kind::kWindow, false}},
        {"include_cycles", {Kind::kBool, false}}}},
      {"verify",
       {{"samples", {Kind::kInteger, false}},
        {"map_tol", {Kind::kNumber, false}},
        {"cycle_tol", {Kind::kNumber, false}},
        {"seed", {Kind::kInteger, false}}}},
  };
  return s;
}

bool finite_number(const Json& v) { return v.is_number() && std::isfinite(v.get<double>()); }

void check_value(const Json& v, Kind kind, const std::string& key) {
  switch (kind) {
    case Kind::kNumber:
      if (!finite_number(v)) bad("config key '" + key + "': expected a finite number");
      return;
    case Kind::kInteger:
      if (!v.is_number_integer()) bad("config key '" + key + "': expected an integer");
      return;
    case Kind::kBool:
      if (!v.is_boolean()) bad("config key '" + key + "': expected true or false");
      return;
    case Kind::kString:
      if (!v.is_string()) bad("config key '" + key + "': expected a string");
      return;
    case Kind::kNumberArray:
      if (!v.is_array() || v.empty()) bad("config key '" + key + "': expected a non-empty array of numbers");
      for (const Json& e : v) {
        if (!finite_number(e)) bad("config key '" + key + "': expected a non-empty array of numbers");
      }
      return;
    case Kind::kPointArray:
      if (!v.is_array()) bad("config key '" + key + "': expected an array of [x, y] pairs");
      for (const Json& e : v) {
        if (!e.is_array() || e.size() != 2 || !finite_number(e[0]) || !finite_number(e[1])) {
          bad("config key '" + key + "': expected an array of [x, y] pairs");
        }
      }
      return;
    case Kind::kWindow:
      if (!v.is_array() || v.size() != 4) bad("config key '" + key + "': expected [xmin, xmax, ymin, ymax]");
      for (const Json& e : v) {
        if (!finite_number(e)) bad("config key '" + key + "': expected [xmin, xmax, ymin, ymax]");
      }
      if (!(v[0].get<double>() < v[1].get<double>()) || !(v[2].get<double>() < v[3].get<double>())) {
        bad("config key '" + key + "': window must satisfy xmin < xmax and ymin < ymax");
      }
      return;
  }
}

}  // namespace

void check(pwl3_status s) {
  if (s != PWL3_OK) throw CliError(s, pwl3_last_error());
}

std::vector<double> Axis::values() const {
  std::vector<double> v;
  if (n == 1) return {lo};
  for (int i = 0; i < n; ++i) v.push_back((lo * (n - 1 - i) + hi * i) / (n - 1));
  return v;
}

const Axis* Grid::find(const std::string& name) const {
  for (const Axis& a : axes) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

Grid parse_grid(const std::string& spec) {
  Grid g;
  if (spec.empty()) bad("grid spec is empty");
  for (const std::string& part : split(spec, ',')) {
    const size_t eq = part.find('=');
    if (eq == std::string::npos || eq == 0) bad("grid axis '" + part + "': expected name=lo:hi:n or name=value");
    Axis a;
    a.name = part.substr(0, eq);
    const std::vector<std::string> f = split(part.substr(eq + 1), ':');
    const std::string what = "grid axis '" + a.name + "'";
    if (f.size() == 1) {
      a.lo = a.hi = parse_number(f[0], what);
    } else if (f.size() == 3) {
      a.lo = parse_number(f[0], what);
      a.hi = parse_number(f[1], what);
      const double n = parse_number(f[2], what);
      if (n != std::floor(n) || n < 1 || n > 1e6) bad(what + ": point count must be an integer in [1, 1e6]");
      a.n = static_cast<int>(n);
      if (a.n == 1 && a.lo != a.hi) bad(what + ": a single point needs lo == hi");
    } else {
      bad(what + ": expected lo:hi:n or a single value");
    }
    if (g.find(a.name)) bad(what + ": given twice");
    g.axes.push_back(a);
  }
  return g;
}

Json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open config '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    bad("config '" + path + "' is not valid JSON: " + e.what());
  }
}

void apply_override(Json& config, const std::string& assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) bad("override '" + assignment + "': expected key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  Json value = Json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  Json* node = &config;
  const std::vector<std::string> path = split(key, '.');
  for (size_t i = 0; i < path.size(); ++i) {
    if (path[i].empty()) bad("override '" + assignment + "': empty key segment");
    if (!node->is_object()) {
      if (!node->is_null()) bad("override '" + assignment + "': '" + path[i - 1] + "' is not an object");
      *node = Json::object();
    }
    node = &(*node)[path[i]];
  }
  *node = value;
}

void validate_config(const Json& config) {
  if (!config.is_object()) bad("config: top level must be an object");
  for (const auto& [name, value] : config.items()) {
    if (name == "tol") {
      check_value(value, Kind::kNumber, "tol");
      continue;
    }
    const auto it = schema().find(name);
    if (it == schema().end()) bad("config key '" + name + "': unknown key");
    if (!value.is_object()) bad("config key '" + name + "': expected an object");
    for (const auto& [k, v] : value.items()) {
      const auto ks = it->second.find(k);
      if (ks == it->second.end()) bad("config key '" + name + "." + k + "': unknown key");
      check_value(v, ks->second.kind, name + "." + k);
    }
    if (name == "params" || name == "family") {
      for (const auto& [k, spec] : it->second) {
        if (spec.required && !value.contains(k)) bad("config key '" + name + "." + k + "': missing");
      }
    }
  }
  if (config.contains("params") && config.contains("family")) {
    bad("config key 'params': give either 'params' or 'family', not both");
  }
}

pwl3_family family_from(const Json& config) {
  if (!config.contains("family")) bad("config key 'family': missing");
  const Json& f = config["family"];
  pwl3_family fam{};
  fam.a1 = f["a1"].get<double>();
  fam.c11 = f["c11"].get<double>();
  fam.a11 = f.contains("a11") ? f["a11"].get<double>() : -fam.a1;
  fam.d2 = f["d2"].get<double>();
  fam.epsilon = f["epsilon"].get<double>();
  fam.b2 = f["b2"].get<double>();
  return fam;
}

pwl3_params params_from(const Json& config) {
  if (config.contains("params")) {
    const Json& p = config["params"];
    return {p["a11"].get<double>(), p["a1"].get<double>(), p["b2"].get<double>(),
            p["d2"].get<double>(),  p["c11"].get<double>(), p["f2"].get<double>()};
  }
  if (!config.contains("family")) bad("config key 'params': missing (give 'params' or 'family')");
  const pwl3_family fam = family_from(config);
  pwl3_params out{};
  check(pwl3_family_params(&fam, &out));
  return out;
}

double check_tol(double tol, const std::string& what) {
  if (!std::isfinite(tol) || tol < 100.0 * std::numeric_limits<double>::epsilon()) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": tolerance " << tol << " is below 100 machine epsilons";
    bad(os.str());
  }
  return tol;
}

double number_or(const Json& config, const char* section, const char* key, double fallback) {
  if (config.contains(section) && config[section].contains(key)) return config[section][key].get<double>();
  return fallback;
}

long integer_or(const Json& config, const char* section, const char* key, long fallback) {
  if (config.contains(section) && config[section].contains(key)) return config[section][key].get<long>();
  return fallback;
}

bool bool_or(const Json& config, const char* section, const char* key, bool fallback) {
  if (config.contains(section) && config[section].contains(key)) return config[section][key].get<bool>();
  return fallback;
}

std::string string_or(const Json& config, const char* section, const char* key, const std::string& fallback) {
  if (config.contains(section) && config[section].contains(key)) return config[section][key].get<std::string>();
  return fallback;
}

}  // namespace pwl3cli

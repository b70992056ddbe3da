#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pwl3/pwl3.h"

namespace pwl3cli {

using Json = nlohmann::json;

/// Error carrying the status used for the exit code and the "error:" line.
class CliError : public std::runtime_error {
 public:
  CliError(pwl3_status code, const std::string& what) : std::runtime_error(what), code_(code) {}
  pwl3_status code() const noexcept { return code_; }

 private:
  pwl3_status code_;
};

/// Throws CliError carrying the library's status and last error message.
void check(pwl3_status s);

/// name=lo:hi:n or name=value
struct Axis {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
  int n = 1;
  std::vector<double> values() const;
};

struct Grid {
  std::vector<Axis> axes;
  const Axis* find(const std::string& name) const;
};

/// Comma-separated axes, e.g. "b2=-1.1:-0.9:21,epsilon=-0.2:0.2:21".
Grid parse_grid(const std::string& spec);

Json load_config(const std::string& path);
/// Sets a dotted key ("family.epsilon=0.1"); the value is read as JSON when
/// it parses, otherwise as a string.
void apply_override(Json& config, const std::string& assignment);
/// Throws CliError(InvalidArgument) naming the offending key.
void validate_config(const Json& config);

pwl3_params params_from(const Json& config);
/// Family block of the config (sweeps need it).
pwl3_family family_from(const Json& config);

/// Rejects tolerances below 100 machine epsilons.
double check_tol(double tol, const std::string& what);

/// Reads config[section][key] with a default.
double number_or(const Json& config, const char* section, const char* key, double fallback);
long integer_or(const Json& config, const char* section, const char* key, long fallback);
bool bool_or(const Json& config, const char* section, const char* key, bool fallback);
std::string string_or(const Json& config, const char* section, const char* key, const std::string& fallback);

}  // namespace pwl3cli

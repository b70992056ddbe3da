#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"

namespace {

struct Flags {
  std::string config_path;
  std::string out_dir;
  std::string format = "csv";
  double tol = 0.0;
  std::string grid;
  std::uint64_t seed = 0;
  std::vector<std::string> overrides;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "JSON config file");
  sub->add_option("--out", f.out_dir, "output directory (CSV to stdout when omitted)");
  sub->add_option("--format", f.format, "csv, svg or both")->check(CLI::IsMember({"csv", "svg", "both"}));
  sub->add_option("--tol", f.tol, "tolerance override (root tolerance, map tolerance for verify)");
  sub->add_option("--grid", f.grid, "grid spec name=lo:hi:n[,name=lo:hi:n]");
  sub->add_option("--seed", f.seed, "seed for randomized draws");
  sub->add_option("overrides", f.overrides, "config overrides key=value, e.g. family.b2=-1.09");
}

void fail(const char* code, const std::string& msg) {
  std::string line = msg;
  for (char& c : line) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  std::cerr << "error: " << code << ": " << line << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  using namespace pwl3cli;
  CLI::App app{"Three-zone piecewise-linear planar systems: classification, half-maps, limit cycles"};
  app.set_version_flag("--version", std::string(pwl3_version()));
  app.require_subcommand(1);

  const std::map<std::string, std::string> descriptions = {
      {"classify", "zone spectra, equilibria and hypothesis report"},
      {"map", "evaluate a half-map on a list or grid of inputs"},
      {"cycles", "find and classify limit cycles"},
      {"sweep", "cycle counts and landmarks over a family grid"},
      {"portrait", "orbit polylines and phase portrait"},
      {"verify", "compare the closed-form maps and cycles with the integrator"},
  };
  std::map<std::string, Flags> flags;
  for (const auto& [name, help] : descriptions) add_flags(app.add_subcommand(name, help), flags[name]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    fail("InvalidArgument", e.what());
    return PWL3_E_INVALID_ARGUMENT;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const Flags& f = flags[command];
  RunOptions o;
  o.command = command;
  try {
    o.config = f.config_path.empty() ? Json::object() : load_config(f.config_path);
    for (const std::string& a : f.overrides) apply_override(o.config, a);
    const CLI::App* sub = app.get_subcommand(command);
    if (sub->count("--tol")) o.config["tol"] = f.tol;
    validate_config(o.config);
    if (o.config.contains("tol")) o.tol = check_tol(o.config["tol"].get<double>(), "config key 'tol'");
    if (sub->count("--grid")) o.grid = f.grid;
    if (sub->count("--seed")) o.seed = f.seed;
    o.out_dir = f.out_dir;
    o.format = f.format;
    if (command == "classify") return cmd_classify(o);
    if (command == "map") return cmd_map(o);
    if (command == "cycles") return cmd_cycles(o);
    if (command == "sweep") return cmd_sweep(o);
    if (command == "portrait") return cmd_portrait(o);
    return cmd_verify(o);
  } catch (const CliError& e) {
    fail(pwl3_status_name(e.code()), e.what());
    return static_cast<int>(e.code());
  } catch (const Json::exception& e) {
    fail("InvalidArgument", e.what());
    return PWL3_E_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    fail("Internal", e.what());
    return PWL3_E_INTERNAL;
  }
}

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "config.hpp"

namespace pwl3cli {

struct RunOptions {
  std::string command;
  Json config;
  std::string out_dir;          ///< empty: primary CSV to stdout, no SVG
  std::string format = "csv";   ///< csv, svg or both
  std::optional<double> tol;
  std::optional<std::string> grid;
  std::optional<std::uint64_t> seed;
};

/// Exit code of a failed verification.
inline constexpr int kVerifyFailed = 20;

int cmd_classify(const RunOptions& o);
int cmd_map(const RunOptions& o);
int cmd_cycles(const RunOptions& o);
int cmd_sweep(const RunOptions& o);
int cmd_portrait(const RunOptions& o);
int cmd_verify(const RunOptions& o);

}  // namespace pwl3cli

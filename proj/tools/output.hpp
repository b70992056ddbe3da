#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"

namespace pwl3cli {

/// %.17g, with nan/inf spelled out.
std::string fmt(double v);

/// CSV with '#' metadata lines (library version, command, compact config
/// echo) followed by a header row. No timestamps.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::string& command, const Json& config,
            const std::vector<std::string>& notes = {});
  void header(const std::vector<std::string>& columns);
  CsvWriter& cell(const std::string& s);
  CsvWriter& cell(double v);
  CsvWriter& cell(long v);
  CsvWriter& cell(int v) { return cell(static_cast<long>(v)); }
  void end_row();

 private:
  std::ostream& out_;
  size_t columns_ = 0;
  size_t filled_ = 0;
};

struct Polyline {
  std::string kind;  ///< "orbit", "cycle", "annulus", "annulus_outer"
  std::vector<double> x;
  std::vector<double> y;
};

struct Window {
  double xmin = -3.0, xmax = 3.0, ymin = -3.0, ymax = 3.0;
};

/// Bounding box of the polylines (always containing both switching lines)
/// with a 5% margin.
Window fit_window(const std::vector<Polyline>& lines);

/// Phase portrait: zones shaded, switching lines x = -1 and x = 1, orbits
/// thin, cycles thick, annulus orbits dashed.
void write_svg(std::ostream& out, const std::vector<Polyline>& lines, const Window& w, const std::string& title);

}  // namespace pwl3cli

#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace pwl3cli {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string short_fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

CsvWriter::CsvWriter(std::ostream& out, const std::string& command, const Json& config,
                     const std::vector<std::string>& notes)
    : out_(out) {
  out_ << "# pwl3 " << pwl3_version() << "\n";
  out_ << "# command: " << command << "\n";
  out_ << "# config: " << config.dump() << "\n";
  for (const std::string& n : notes) out_ << "# " << n << "\n";
}

void CsvWriter::header(const std::vector<std::string>& columns) {
  columns_ = columns.size();
  for (size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << "\n";
}

CsvWriter& CsvWriter::cell(const std::string& s) {
  if (filled_++) out_ << ",";
  out_ << s;
  return *this;
}

CsvWriter& CsvWriter::cell(double v) { return cell(fmt(v)); }

CsvWriter& CsvWriter::cell(long v) { return cell(std::to_string(v)); }

void CsvWriter::end_row() {
  if (filled_ != columns_) {
    throw CliError(PWL3_E_INTERNAL, "csv row has " + std::to_string(filled_) + " cells, header has " +
                                        std::to_string(columns_));
  }
  out_ << "\n";
  filled_ = 0;
}

Window fit_window(const std::vector<Polyline>& lines) {
  Window w{-1.0, 1.0, -1.0, 1.0};
  for (const Polyline& l : lines) {
    for (size_t i = 0; i < l.x.size(); ++i) {
      if (!std::isfinite(l.x[i]) || !std::isfinite(l.y[i])) continue;
      w.xmin = std::min(w.xmin, l.x[i]);
      w.xmax = std::max(w.xmax, l.x[i]);
      w.ymin = std::min(w.ymin, l.y[i]);
      w.ymax = std::max(w.ymax, l.y[i]);
    }
  }
  const double mx = 0.05 * (w.xmax - w.xmin);
  const double my = 0.05 * (w.ymax - w.ymin);
  return {w.xmin - mx, w.xmax + mx, w.ymin - my, w.ymax + my};
}

void write_svg(std::ostream& out, const std::vector<Polyline>& lines, const Window& w, const std::string& title) {
  const double width = 800.0;
  const double height = std::clamp(width * (w.ymax - w.ymin) / (w.xmax - w.xmin), 200.0, 1600.0);
  const double sx = width / (w.xmax - w.xmin);
  const double sy = height / (w.ymax - w.ymin);
  auto px = [&](double x) { return (x - w.xmin) * sx; };
  auto py = [&](double y) { return (w.ymax - y) * sy; };
  auto clampx = [&](double x) { return std::clamp(px(x), 0.0, width); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << short_fmt(width) << "\" height=\""
      << short_fmt(height) << "\" viewBox=\"0 0 " << short_fmt(width) << " " << short_fmt(height) << "\">\n";
  out << "<title>" << title << "</title>\n";
  const double xl = clampx(-1.0);
  const double xr = clampx(1.0);
  out << "<rect class=\"zone-minus\" x=\"0\" y=\"0\" width=\"" << short_fmt(xl) << "\" height=\""
      << short_fmt(height) << "\" fill=\"#e8f0fb\"/>\n";
  out << "<rect class=\"zone-central\" x=\"" << short_fmt(xl) << "\" y=\"0\" width=\"" << short_fmt(xr - xl)
      << "\" height=\"" << short_fmt(height) << "\" fill=\"#f7f7f7\"/>\n";
  out << "<rect class=\"zone-plus\" x=\"" << short_fmt(xr) << "\" y=\"0\" width=\"" << short_fmt(width - xr)
      << "\" height=\"" << short_fmt(height) << "\" fill=\"#fbeee6\"/>\n";
  for (double b : {-1.0, 1.0}) {
    out << "<line class=\"switching-line\" x1=\"" << short_fmt(px(b)) << "\" y1=\"0\" x2=\"" << short_fmt(px(b))
        << "\" y2=\"" << short_fmt(height) << "\" stroke=\"#555\" stroke-width=\"1\"/>\n";
  }
  for (const Polyline& l : lines) {
    std::string style = "stroke=\"#2b5fad\" stroke-width=\"0.8\"";
    if (l.kind == "cycle") style = "stroke=\"#c0262d\" stroke-width=\"2.5\"";
    if (l.kind == "annulus") style = "stroke=\"#2e8b57\" stroke-width=\"0.8\" stroke-dasharray=\"4 2\"";
    if (l.kind == "annulus_outer") style = "stroke=\"#2e8b57\" stroke-width=\"2\"";
    out << "<polyline class=\"" << l.kind << "\" fill=\"none\" " << style << " points=\"";
    for (size_t i = 0; i < l.x.size(); ++i) {
      if (!std::isfinite(l.x[i]) || !std::isfinite(l.y[i])) continue;
      out << (i ? " " : "") << short_fmt(px(l.x[i])) << "," << short_fmt(py(l.y[i]));
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace pwl3cli

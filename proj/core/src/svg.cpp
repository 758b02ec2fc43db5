#include "dadmm/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "dadmm/fsio.hpp"

namespace dadmm {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf"};
constexpr int kPaletteSize = 7;

std::string escape_xml(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<SvgSeries>& series,
                           const std::string& comment) {
  const double width = 880, height = 540;
  const double left = 80, right = width - 230, top = 50, bottom = height - 60;

  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  if (!(x_min < x_max)) { x_min = 0; x_max = 1; }
  if (!(y_min < y_max)) { y_min -= 0.5; y_max += 0.5; }
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  auto sx = [&](double x) { return left + (x - x_min) / (x_max - x_min) * (right - left); };
  auto sy = [&](double y) { return bottom - (y - y_min) / (y_max - y_min) * (bottom - top); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  if (!comment.empty()) out << "<!-- " << escape_xml(comment) << " -->\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << (left + right) / 2 << "\" y=\"24\" font-size=\"16\" "
      << "text-anchor=\"middle\" font-family=\"sans-serif\">" << escape_xml(title)
      << "</text>\n";

  // Gridlines and tick labels, 6 divisions per axis.
  for (int i = 0; i <= 5; ++i) {
    const double xv = x_min + (x_max - x_min) * i / 5.0;
    const double yv = y_min + (y_max - y_min) * i / 5.0;
    out << "<line x1=\"" << sx(xv) << "\" y1=\"" << top << "\" x2=\"" << sx(xv)
        << "\" y2=\"" << bottom << "\" stroke=\"#e0e0e0\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << sy(yv) << "\" x2=\"" << right
        << "\" y2=\"" << sy(yv) << "\" stroke=\"#e0e0e0\"/>\n";
    out << "<text x=\"" << sx(xv) << "\" y=\"" << bottom + 18
        << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">"
        << num(xv) << "</text>\n";
    out << "<text x=\"" << left - 8 << "\" y=\"" << sy(yv) + 4
        << "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">"
        << num(yv) << "</text>\n";
  }
  out << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right
      << "\" y2=\"" << bottom << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << bottom << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << (left + right) / 2 << "\" y=\"" << height - 16
      << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\">"
      << escape_xml(x_label) << "</text>\n";
  out << "<text x=\"20\" y=\"" << (top + bottom) / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "transform=\"rotate(-90 20 " << (top + bottom) / 2 << ")\">"
      << escape_xml(y_label) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % kPaletteSize];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
    for (const auto& [x, y] : series[s].points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      out << num(sx(x)) << "," << num(sy(y)) << " ";
    }
    out << "\"/>\n";
    const double ly = top + 16 + 22 * static_cast<double>(s);
    out << "<line x1=\"" << right + 14 << "\" y1=\"" << ly << "\" x2=\"" << right + 44
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << right + 50 << "\" y=\"" << ly + 4
        << "\" font-size=\"12\" font-family=\"sans-serif\">" << escape_xml(series[s].label)
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void write_line_chart_svg(const std::string& path, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::vector<SvgSeries>& series,
                          const std::string& comment) {
  write_text_file(path, line_chart_svg(title, x_label, y_label, series, comment));
}

}  // namespace dadmm

#include "aoinoma/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "aoinoma/format.hpp"

namespace aoinoma {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 64.0;
constexpr double kRight = 616.0;
constexpr double kTop = 44.0;
constexpr double kBottom = 368.0;

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  void finalize() {
    if (lo > hi) {
      lo = 0.0;
      hi = 1.0;
    }
    if (lo == hi) {
      const double pad = (lo == 0.0) ? 1.0 : std::abs(lo) * 0.1;
      lo -= pad;
      hi += pad;
    }
  }

  double span() const { return hi - lo; }
};

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

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

}  // namespace

std::string line_plot_svg(const std::string& title, const std::string& x_label,
                          const std::string& y_label,
                          const std::vector<PlotSeries>& series) {
  Range xr, yr;
  for (const PlotSeries& s : series) {
    for (double v : s.x) xr.include(v);
    for (double v : s.y) yr.include(v);
  }
  xr.finalize();
  yr.finalize();

  auto px = [&](double v) {
    return kLeft + (v - xr.lo) / xr.span() * (kRight - kLeft);
  };
  auto py = [&](double v) {
    return kBottom - (v - yr.lo) / yr.span() * (kBottom - kTop);
  };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
         "height=\"420\" viewBox=\"0 0 640 420\">\n";
  out += "<rect width=\"640\" height=\"420\" fill=\"white\"/>\n";
  out += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">" +
         escape_xml(title) + "</text>\n";

  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double fx = xr.lo + xr.span() * i / ticks;
    const double fy = yr.lo + yr.span() * i / ticks;
    const std::string gx = format_coord(px(fx));
    const std::string gy = format_coord(py(fy));
    out += "<line x1=\"" + gx + "\" y1=\"" + format_coord(kBottom) +
           "\" x2=\"" + gx + "\" y2=\"" + format_coord(kBottom + 5) +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + gx + "\" y=\"" + format_coord(kBottom + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">" +
           tick_label(fx) + "</text>\n";
    out += "<line x1=\"" + format_coord(kLeft - 5) + "\" y1=\"" + gy +
           "\" x2=\"" + format_coord(kLeft) + "\" y2=\"" + gy +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + format_coord(kLeft - 8) + "\" y=\"" +
           format_coord(py(fy) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">" +
           tick_label(fy) + "</text>\n";
  }

  out += "<line x1=\"" + format_coord(kLeft) + "\" y1=\"" +
         format_coord(kTop) + "\" x2=\"" + format_coord(kLeft) + "\" y2=\"" +
         format_coord(kBottom) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + format_coord(kLeft) + "\" y1=\"" +
         format_coord(kBottom) + "\" x2=\"" + format_coord(kRight) +
         "\" y2=\"" + format_coord(kBottom) + "\" stroke=\"black\"/>\n";
  out += "<text x=\"" + format_coord((kLeft + kRight) / 2) + "\" y=\"" +
         format_coord(kHeight - 10) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">" +
         escape_xml(x_label) + "</text>\n";
  out += "<text x=\"16\" y=\"" + format_coord((kTop + kBottom) / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 16 " +
         format_coord((kTop + kBottom) / 2) + ")\">" +
         escape_xml(y_label) + "</text>\n";

  for (const PlotSeries& s : series) {
    std::string points;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!points.empty()) points += ' ';
      points += format_coord(px(s.x[i])) + "," + format_coord(py(s.y[i]));
    }
    out += "<polyline fill=\"none\" stroke=\"" + s.color +
           "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
  }

  double legend_y = kTop + 8;
  for (const PlotSeries& s : series) {
    const std::string ly = format_coord(legend_y);
    out += "<line x1=\"" + format_coord(kRight - 120) + "\" y1=\"" + ly +
           "\" x2=\"" + format_coord(kRight - 96) + "\" y2=\"" + ly +
           "\" stroke=\"" + s.color + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + format_coord(kRight - 90) + "\" y=\"" +
           format_coord(legend_y + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" +
           escape_xml(s.label) + "</text>\n";
    legend_y += 16;
  }

  out += "</svg>\n";
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

}  // namespace aoinoma

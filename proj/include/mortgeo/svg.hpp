#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

// Self-contained static SVG line charts with a fixed deterministic layout.

namespace mortgeo::svg {

struct Series {
  std::string label;
  std::vector<double> xs;
  std::vector<double> ys;
  bool dashed = false;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 720;
  int height = 440;
  std::vector<Series> series;
};

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline double nice_step(double range) {
  const double raw = range / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double nice = 10.0;
  if (frac <= 1.0) nice = 1.0;
  else if (frac <= 2.0) nice = 2.0;
  else if (frac <= 5.0) nice = 5.0;
  return nice * mag;
}

}  // namespace detail

inline void write_chart(const Chart& chart, std::ostream& out) {
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#7f7f7f", "#9467bd"};
  const double ml = 64, mr = 16, mt = 30, mb = 46;
  const double pw = chart.width - ml - mr;
  const double ph = chart.height - mt - mb;

  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  bool first = true;
  for (const Series& s : chart.series) {
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      if (first) {
        x_min = x_max = s.xs[i];
        y_min = y_max = s.ys[i];
        first = false;
      }
      x_min = std::min(x_min, s.xs[i]);
      x_max = std::max(x_max, s.xs[i]);
      y_min = std::min(y_min, s.ys[i]);
      y_max = std::max(y_max, s.ys[i]);
    }
  }
  if (x_max - x_min <= 0) { x_min -= 1; x_max += 1; }
  if (y_max - y_min <= 0) { y_min -= 1; y_max += 1; }
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  const auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
  const auto py = [&](double y) { return mt + ph - (y - y_min) / (y_max - y_min) * ph; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << chart.width << "\" height=\""
      << chart.height << "\" viewBox=\"0 0 " << chart.width << " " << chart.height << "\">\n";
  out << "<rect width=\"" << chart.width << "\" height=\"" << chart.height
      << "\" fill=\"#ffffff\"/>\n";
  out << "<text x=\"" << detail::num(chart.width / 2.0)
      << "\" y=\"18\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\">"
      << chart.title << "</text>\n";

  const double x_step = detail::nice_step(x_max - x_min);
  for (double v = std::ceil(x_min / x_step) * x_step; v <= x_max + 1e-9 * x_step; v += x_step) {
    const double x = px(v);
    out << "<line x1=\"" << detail::num(x) << "\" y1=\"" << detail::num(mt) << "\" x2=\""
        << detail::num(x) << "\" y2=\"" << detail::num(mt + ph)
        << "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << detail::num(x) << "\" y=\"" << detail::num(mt + ph + 16)
        << "\" font-family=\"monospace\" font-size=\"10\" text-anchor=\"middle\">"
        << detail::tick_label(v) << "</text>\n";
  }
  const double y_step = detail::nice_step(y_max - y_min);
  for (double v = std::ceil(y_min / y_step) * y_step; v <= y_max + 1e-9 * y_step; v += y_step) {
    const double y = py(v);
    out << "<line x1=\"" << detail::num(ml) << "\" y1=\"" << detail::num(y) << "\" x2=\""
        << detail::num(ml + pw) << "\" y2=\"" << detail::num(y)
        << "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << detail::num(ml - 6) << "\" y=\"" << detail::num(y + 3)
        << "\" font-family=\"monospace\" font-size=\"10\" text-anchor=\"end\">"
        << detail::tick_label(v) << "</text>\n";
  }

  out << "<rect x=\"" << detail::num(ml) << "\" y=\"" << detail::num(mt) << "\" width=\""
      << detail::num(pw) << "\" height=\"" << detail::num(ph)
      << "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
  out << "<text x=\"" << detail::num(ml + pw / 2.0) << "\" y=\""
      << detail::num(chart.height - 8.0)
      << "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">" << chart.x_label
      << "</text>\n";
  out << "<text x=\"14\" y=\"" << detail::num(mt + ph / 2.0)
      << "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << detail::num(mt + ph / 2.0) << ")\">" << chart.y_label << "</text>\n";

  for (std::size_t si = 0; si < chart.series.size(); ++si) {
    const Series& s = chart.series[si];
    const char* color = kColors[si % 5];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
    if (s.dashed) out << " stroke-dasharray=\"5,3\"";
    out << " points=\"";
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      if (i) out << " ";
      out << detail::num(px(s.xs[i])) << "," << detail::num(py(s.ys[i]));
    }
    out << "\"/>\n";
    // legend swatch, top right
    const double ly = mt + 14.0 + 14.0 * static_cast<double>(si);
    out << "<line x1=\"" << detail::num(ml + pw - 110) << "\" y1=\"" << detail::num(ly - 4)
        << "\" x2=\"" << detail::num(ml + pw - 90) << "\" y2=\"" << detail::num(ly - 4)
        << "\" stroke=\"" << color << "\" stroke-width=\"1.5\""
        << (s.dashed ? " stroke-dasharray=\"5,3\"" : "") << "/>\n";
    out << "<text x=\"" << detail::num(ml + pw - 86) << "\" y=\"" << detail::num(ly)
        << "\" font-family=\"monospace\" font-size=\"10\">" << s.label << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace mortgeo::svg

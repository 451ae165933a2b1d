#pragma once

// Minimal standalone SVG 1.1 line charts: axes, ticks, legend, polyline
// series and optional horizontal guide lines. Text output only, so charts
// are deterministic and testable by substring.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bankdyn {

struct SvgSeries {
  std::string label;
  std::vector<std::array<double, 2>> points;  // (x, y)
};

struct SvgChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<SvgSeries> series;
  std::vector<double> guides;  // horizontal guide lines at these y values
};

namespace detail {

inline std::string svg_num(double v, int precision = 2) {
  if (!std::isfinite(v)) return "0";
  char buf[48];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
  return std::string(buf, ptr);
}

inline std::string svg_label(double v) {
  char buf[48];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
  return std::string(buf, ptr);
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out += c;
  }
  return out;
}

inline constexpr std::array<const char*, 10> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

}  // namespace detail

inline void render_svg_lines(const SvgChart& chart, const std::string& path) {
  if (chart.series.empty())
    throw std::invalid_argument("render_svg_lines: need at least one series");
  for (const SvgSeries& s : chart.series)
    if (s.points.empty())
      throw std::invalid_argument("render_svg_lines: series '" + s.label +
                                  "' has no points");

  double x_min = chart.series[0].points[0][0], x_max = x_min;
  double y_min = chart.series[0].points[0][1], y_max = y_min;
  for (const SvgSeries& s : chart.series) {
    for (const auto& pt : s.points) {
      x_min = std::min(x_min, pt[0]);
      x_max = std::max(x_max, pt[0]);
      y_min = std::min(y_min, pt[1]);
      y_max = std::max(y_max, pt[1]);
    }
  }
  for (const double g : chart.guides) {
    y_min = std::min(y_min, g);
    y_max = std::max(y_max, g);
  }
  if (x_max == x_min) {
    x_min -= 0.5;
    x_max += 0.5;
  }
  if (y_max == y_min) {
    y_min -= 0.5;
    y_max += 0.5;
  }

  constexpr double w = 800, h = 500;
  constexpr double ml = 80, mr = 170, mt = 50, mb = 60;
  const double plot_w = w - ml - mr, plot_h = h - mt - mb;
  const auto sx = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * plot_w; };
  const auto sy = [&](double y) { return mt + (y_max - y) / (y_max - y_min) * plot_h; };

  using detail::svg_label;
  using detail::svg_num;
  using detail::xml_escape;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
         "viewBox=\"0 0 " << w << " " << h << "\">\n"
      << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n"
      << "<text x=\"" << svg_num(w / 2) << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << xml_escape(chart.title) << "</text>\n";

  // axes with five ticks each
  out << "<g stroke=\"black\" fill=\"none\">\n"
      << "<line x1=\"" << svg_num(ml) << "\" y1=\"" << svg_num(mt + plot_h)
      << "\" x2=\"" << svg_num(ml + plot_w) << "\" y2=\"" << svg_num(mt + plot_h)
      << "\"/>\n"
      << "<line x1=\"" << svg_num(ml) << "\" y1=\"" << svg_num(mt) << "\" x2=\""
      << svg_num(ml) << "\" y2=\"" << svg_num(mt + plot_h) << "\"/>\n</g>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x_min + (x_max - x_min) * i / 4.0;
    const double fy = y_min + (y_max - y_min) * i / 4.0;
    out << "<text x=\"" << svg_num(sx(fx)) << "\" y=\"" << svg_num(mt + plot_h + 18)
        << "\" text-anchor=\"middle\">" << svg_label(fx) << "</text>\n"
        << "<text x=\"" << svg_num(ml - 8) << "\" y=\"" << svg_num(sy(fy) + 4)
        << "\" text-anchor=\"end\">" << svg_label(fy) << "</text>\n";
  }
  out << "<text x=\"" << svg_num(ml + plot_w / 2) << "\" y=\""
      << svg_num(h - 16) << "\" text-anchor=\"middle\">"
      << xml_escape(chart.x_label) << "</text>\n"
      << "<text x=\"18\" y=\"" << svg_num(mt + plot_h / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << svg_num(mt + plot_h / 2) << ")\">" << xml_escape(chart.y_label)
      << "</text>\n</g>\n";

  for (const double g : chart.guides) {
    out << "<line x1=\"" << svg_num(ml) << "\" y1=\"" << svg_num(sy(g))
        << "\" x2=\"" << svg_num(ml + plot_w) << "\" y2=\"" << svg_num(sy(g))
        << "\" stroke=\"#444444\" stroke-dasharray=\"6 4\"/>\n"
        << "<text x=\"" << svg_num(ml + plot_w + 6) << "\" y=\""
        << svg_num(sy(g) + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#444444\">"
        << svg_label(g) << "</text>\n";
  }

  for (std::size_t i = 0; i < chart.series.size(); ++i) {
    const char* color = detail::kPalette[i % detail::kPalette.size()];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& pt : chart.series[i].points)
      out << svg_num(sx(pt[0])) << ',' << svg_num(sy(pt[1])) << ' ';
    out << "\"/>\n";
  }

  // legend
  out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t i = 0; i < chart.series.size(); ++i) {
    const double ly = mt + 10 + 18.0 * static_cast<double>(i);
    const char* color = detail::kPalette[i % detail::kPalette.size()];
    out << "<line x1=\"" << svg_num(w - mr + 14) << "\" y1=\"" << svg_num(ly)
        << "\" x2=\"" << svg_num(w - mr + 38) << "\" y2=\"" << svg_num(ly)
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << svg_num(w - mr + 44) << "\" y=\"" << svg_num(ly + 4)
        << "\">" << xml_escape(chart.series[i].label) << "</text>\n";
  }
  out << "</g>\n</svg>\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace bankdyn

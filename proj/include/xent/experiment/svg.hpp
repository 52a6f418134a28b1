#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "xent/error.hpp"
#include "xent/estimation/monte_carlo.hpp"

namespace xent {

/// One plotted series: aggregate rows plus an optional reference value drawn
/// as a dashed horizontal line.
struct PlotSeries {
  std::string label;
  AggregateSeries data;
  std::optional<double> reference;
};

/// Parses the aggregate CSV written by write_aggregate_csv (nats).
inline AggregateSeries read_aggregate_csv(std::istream& in, Axis axis = Axis::M) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)) && line.rfind("index,mean_", 0) == 0, ErrorCode::Io,
          "missing aggregate CSV header");
  AggregateSeries out;
  out.axis = axis;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    require(f.size() == 5, ErrorCode::Io, "bad aggregate row '" + line + "'");
    AggregatePoint p;
    try {
      p.index = std::stoull(f[0]);
      if (f[1] != "nan") p.mean = std::stod(f[1]);
      if (f[2] != "nan") p.sem = std::stod(f[2]);
      p.trial_count = std::stoull(f[3]);
      p.censored_count = std::stoull(f[4]);
    } catch (const std::exception&) {
      fail(ErrorCode::Io, "bad aggregate row '" + line + "'");
    }
    out.points.push_back(p);
  }
  return out;
}

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

/// SVG 1.1 line plot: mean with SEM error bars against log10(index), one
/// dashed reference line per series. Output depends only on the arguments.
inline std::string render_svg(const std::vector<PlotSeries>& series, const std::string& title,
                              const std::string& y_label) {
  constexpr double width = 720, height = 480, left = 80, right = 200, top = 50, bottom = 60;
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  double x_lo = kPosInf, x_hi = kNegInf, y_lo = kPosInf, y_hi = kNegInf;
  for (const auto& s : series) {
    if (s.reference) {
      y_lo = std::min(y_lo, *s.reference);
      y_hi = std::max(y_hi, *s.reference);
    }
    for (const auto& p : s.data.points) {
      const double lx = std::log10(static_cast<double>(p.index));
      x_lo = std::min(x_lo, lx);
      x_hi = std::max(x_hi, lx);
      if (p.mean) {
        const double e = p.sem.value_or(0.0);
        y_lo = std::min(y_lo, *p.mean - e);
        y_hi = std::max(y_hi, *p.mean + e);
      }
    }
  }
  require(x_lo <= x_hi && y_lo <= y_hi, ErrorCode::InvalidArgument, "nothing to plot");
  if (x_hi - x_lo < 1e-9) x_hi = x_lo + 1;
  const double pad = std::max(0.05 * (y_hi - y_lo), 1e-3);
  y_lo -= pad;
  y_hi += pad;

  const double pw = width - left - right, ph = height - top - bottom;
  auto sx = [&](double lx) { return left + (lx - x_lo) / (x_hi - x_lo) * pw; };
  auto sy = [&](double y) { return top + (y_hi - y) / (y_hi - y_lo) * ph; };
  using detail::svg_num;

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
    << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << svg_num(left + pw / 2) << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
    << "font-size=\"16\">" << detail::xml_escape(title) << "</text>\n"
    << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  // x ticks at integer decades
  for (int d = static_cast<int>(std::ceil(x_lo - 1e-9)); d <= static_cast<int>(std::floor(x_hi + 1e-9)); ++d) {
    const double x = sx(d);
    o << "<line x1=\"" << svg_num(x) << "\" y1=\"" << svg_num(top + ph) << "\" x2=\"" << svg_num(x) << "\" y2=\""
      << svg_num(top + ph + 5) << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << svg_num(x) << "\" y=\"" << svg_num(top + ph + 20)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">1e" << d << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double v = y_lo + (y_hi - y_lo) * i / 4.0;
    const double y = sy(v);
    char label[32];
    std::snprintf(label, sizeof label, "%.3f", v);
    o << "<line x1=\"" << svg_num(left - 5) << "\" y1=\"" << svg_num(y) << "\" x2=\"" << svg_num(left) << "\" y2=\""
      << svg_num(y) << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << svg_num(left - 8) << "\" y=\"" << svg_num(y + 4)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << label << "</text>\n";
  }
  o << "<text x=\"" << svg_num(left + pw / 2) << "\" y=\"" << svg_num(height - 15)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << to_string(series.front().data.axis)
    << " (log scale)</text>\n"
    << "<text transform=\"translate(20," << svg_num(top + ph / 2)
    << ") rotate(-90)\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
    << detail::xml_escape(y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = colors[k % std::size(colors)];
    if (s.reference) {
      const double ry = sy(*s.reference);
      o << "<line x1=\"" << svg_num(left) << "\" y1=\"" << svg_num(ry) << "\" x2=\"" << svg_num(left + pw)
        << "\" y2=\"" << svg_num(ry) << "\" stroke=\"" << color << "\" stroke-dasharray=\"6,4\"/>\n";
    }
    std::string points;
    for (const auto& p : s.data.points) {
      if (!p.mean) continue;
      const double x = sx(std::log10(static_cast<double>(p.index)));
      if (!points.empty()) points += ' ';
      points += svg_num(x) + ',' + svg_num(sy(*p.mean));
      const double e = p.sem.value_or(0.0);
      o << "<line x1=\"" << svg_num(x) << "\" y1=\"" << svg_num(sy(*p.mean - e)) << "\" x2=\"" << svg_num(x)
        << "\" y2=\"" << svg_num(sy(*p.mean + e)) << "\" stroke=\"" << color << "\"/>\n"
        << "<circle cx=\"" << svg_num(x) << "\" cy=\"" << svg_num(sy(*p.mean)) << "\" r=\"3\" fill=\"" << color
        << "\"/>\n";
    }
    o << "<polyline points=\"" << points << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    const double ly = top + 20 + 40.0 * static_cast<double>(k);
    o << "<line x1=\"" << svg_num(left + pw + 15) << "\" y1=\"" << svg_num(ly) << "\" x2=\"" << svg_num(left + pw + 40)
      << "\" y2=\"" << svg_num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n"
      << "<text x=\"" << svg_num(left + pw + 45) << "\" y=\"" << svg_num(ly + 4)
      << "\" font-family=\"sans-serif\" font-size=\"12\">" << detail::xml_escape(s.label) << "</text>\n";
    if (!s.reference) continue;
    char ref[64];
    std::snprintf(ref, sizeof ref, "reference %.4f", *s.reference);
    o << "<text x=\"" << svg_num(left + pw + 45) << "\" y=\"" << svg_num(ly + 20)
      << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color << "\">" << ref << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace xent

#pragma once

// Minimal static SVG 1.1 plots: line charts with optional log axes and a
// discrete-colormap heatmap.

#include "limqr/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace limqr::svg {

struct Series {
  std::string name;
  std::vector<double> x, y;
};

struct LinePlot {
  std::string title, xlabel, ylabel;
  bool logx = false, logy = false;
  std::vector<Series> series;
};

namespace detail {

inline std::string num(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.2f", v);
  return b;
}

inline std::string tick(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

inline std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<')
      o += "&lt;";
    else if (c == '>')
      o += "&gt;";
    else if (c == '&')
      o += "&amp;";
    else
      o += c;
  }
  return o;
}

inline const char* palette(std::size_t i) {
  static const char* c[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
  return c[i % 7];
}

struct Axis {
  double lo, hi;
  bool log;
  double map(double v, double a, double b) const {
    const double t = log ? (std::log10(v) - lo) / (hi - lo) : (v - lo) / (hi - lo);
    return a + t * (b - a);
  }
};

inline Axis make_axis(const std::vector<double>& vals, bool log) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : vals) {
    if (!std::isfinite(v) || (log && v <= 0.0)) continue;
    const double t = log ? std::log10(v) : v;
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
  if (log) {
    lo = std::floor(lo);
    hi = std::ceil(hi);
  }
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  return {lo, hi, log};
}

} // namespace detail

/// Points with non-finite (or, on log axes, non-positive) coordinates are skipped.
inline std::string render(const LinePlot& p) {
  const double W = 640, H = 440, L = 80, R = 160, T = 40, B = 60;
  std::vector<double> xs, ys;
  for (const auto& s : p.series) {
    xs.insert(xs.end(), s.x.begin(), s.x.end());
    ys.insert(ys.end(), s.y.begin(), s.y.end());
  }
  const auto ax = detail::make_axis(xs, p.logx);
  const auto ay = detail::make_axis(ys, p.logy);
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H << "\">\n"
    << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n"
    << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << detail::escape(p.title)
    << "</text>\n"
    << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  const int nt = 5;
  for (int k = 0; k <= nt; ++k) {
    const double fx = ax.lo + (ax.hi - ax.lo) * k / nt, fy = ay.lo + (ay.hi - ay.lo) * k / nt;
    const double px = L + (W - L - R) * k / nt, py = H - B - (H - T - B) * k / nt;
    o << "<text x=\"" << detail::num(px) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\" font-size=\"11\">"
      << detail::tick(ax.log ? std::pow(10.0, fx) : fx) << "</text>\n";
    o << "<text x=\"" << L - 6 << "\" y=\"" << detail::num(py + 4) << "\" text-anchor=\"end\" font-size=\"11\">"
      << detail::tick(ay.log ? std::pow(10.0, fy) : fy) << "</text>\n";
  }
  o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 16 << "\" text-anchor=\"middle\" font-size=\"13\">"
    << detail::escape(p.xlabel) << "</text>\n"
    << "<text x=\"18\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
    << (T + H - B) / 2 << ")\">" << detail::escape(p.ylabel) << "</text>\n";
  for (std::size_t si = 0; si < p.series.size(); ++si) {
    const auto& s = p.series[si];
    std::string pts;
    for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
      const double x = s.x[k], y = s.y[k];
      if (!std::isfinite(x) || !std::isfinite(y) || (p.logx && x <= 0) || (p.logy && y <= 0)) continue;
      pts += detail::num(ax.map(x, L, W - R)) + "," + detail::num(ay.map(y, H - B, T)) + " ";
    }
    o << "<polyline fill=\"none\" stroke=\"" << detail::palette(si) << "\" stroke-width=\"1.5\" points=\"" << pts
      << "\"/>\n";
    o << "<text x=\"" << W - R + 10 << "\" y=\"" << T + 16 * (si + 1) << "\" font-size=\"12\" fill=\""
      << detail::palette(si) << "\">" << detail::escape(s.name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

struct Heatmap {
  std::string title, xlabel, ylabel;
  std::vector<double> xticks, yticks;  // column and row labels
  std::vector<double> values;          // row-major, rows = yticks; nan = failed cell
};

/// Cells coloured by floor(log10(value)) on a discrete ramp; failed cells grey.
inline std::string render(const Heatmap& h) {
  require(h.values.size() == h.xticks.size() * h.yticks.size(), "heatmap: grid size mismatch");
  static const char* ramp[] = {"#08306b", "#2171b5", "#6baed6", "#c6dbef", "#fee391", "#fe9929", "#cc4c02", "#662506"};
  const double W = 640, H = 440, L = 80, R = 160, T = 40, B = 60;
  const std::size_t nx = h.xticks.size(), ny = h.yticks.size();
  int dmin = std::numeric_limits<int>::max(), dmax = std::numeric_limits<int>::min();
  for (double v : h.values)
    if (std::isfinite(v) && v > 0) {
      const int d = static_cast<int>(std::floor(std::log10(v)));
      dmin = std::min(dmin, d);
      dmax = std::max(dmax, d);
    }
  if (dmin > dmax) dmin = dmax = 0;
  const double cw = (W - L - R) / static_cast<double>(std::max<std::size_t>(nx, 1));
  const double ch = (H - T - B) / static_cast<double>(std::max<std::size_t>(ny, 1));
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H << "\">\n"
    << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n"
    << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << detail::escape(h.title)
    << "</text>\n";
  for (std::size_t r = 0; r < ny; ++r)
    for (std::size_t c = 0; c < nx; ++c) {
      const double v = h.values[r * nx + c];
      std::string fill = "#bdbdbd";
      if (std::isfinite(v) && v > 0) {
        const int d = static_cast<int>(std::floor(std::log10(v)));
        fill = ramp[std::min(7, std::max(0, d - dmin))];
      }
      const double x = L + cw * static_cast<double>(c);
      const double y = H - B - ch * static_cast<double>(r + 1);
      o << "<rect x=\"" << detail::num(x) << "\" y=\"" << detail::num(y) << "\" width=\"" << detail::num(cw)
        << "\" height=\"" << detail::num(ch) << "\" fill=\"" << fill << "\" stroke=\"white\"/>\n";
    }
  for (std::size_t c = 0; c < nx; ++c)
    o << "<text x=\"" << detail::num(L + cw * (static_cast<double>(c) + 0.5)) << "\" y=\"" << H - B + 18
      << "\" text-anchor=\"middle\" font-size=\"11\">" << detail::tick(h.xticks[c]) << "</text>\n";
  for (std::size_t r = 0; r < ny; ++r)
    o << "<text x=\"" << L - 6 << "\" y=\"" << detail::num(H - B - ch * (static_cast<double>(r) + 0.5) + 4)
      << "\" text-anchor=\"end\" font-size=\"11\">" << detail::tick(h.yticks[r]) << "</text>\n";
  o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 16 << "\" text-anchor=\"middle\" font-size=\"13\">"
    << detail::escape(h.xlabel) << "</text>\n"
    << "<text x=\"18\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
    << (T + H - B) / 2 << ")\">" << detail::escape(h.ylabel) << "</text>\n";
  for (int d = dmin; d <= std::min(dmax, dmin + 7); ++d)
    o << "<rect x=\"" << W - R + 10 << "\" y=\"" << T + 18 * (d - dmin) << "\" width=\"14\" height=\"14\" fill=\""
      << ramp[d - dmin] << "\"/>\n<text x=\"" << W - R + 30 << "\" y=\"" << T + 18 * (d - dmin) + 11
      << "\" font-size=\"11\">1e" << d << "</text>\n";
  o << "</svg>\n";
  return o.str();
}

} // namespace limqr::svg

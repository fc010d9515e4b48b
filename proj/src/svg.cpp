#include "netpress/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace netpress {

namespace {

constexpr int kWidth = 880;
constexpr int kHeight = 540;
constexpr int kLeft = 70, kRight = 24, kTop = 40, kBottom = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#ff7f0e", "#9467bd", "#8c564b"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Tick step of the form {1,2,5}*10^k giving roughly `target` divisions.
double nice_step(double range, int target) {
  if (range <= 0.0) return 1.0;
  double raw = range / target;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double norm = raw / mag;
  double factor = norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0;
  return factor * mag;
}

}  // namespace

void write_line_chart(const std::string& path,
                      const std::vector<Series>& series,
                      const std::string& x_label, const std::string& y_label,
                      const std::string& title) {
  if (series.empty()) throw std::invalid_argument("no series to plot");

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const Series& s : series) {
    if (s.x.size() != s.y.size())
      throw std::invalid_argument("series x/y length mismatch");
    for (double v : s.x) { xmin = std::min(xmin, v); xmax = std::max(xmax, v); }
    for (double v : s.y) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
  }
  if (!std::isfinite(xmin) || !std::isfinite(ymin))
    throw std::invalid_argument("no data points to plot");
  if (xmax == xmin) { xmax += 1.0; xmin -= 1.0; }
  if (ymax == ymin) { ymax += 1.0; ymin -= 1.0; }

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * plot_w; };
  auto py = [&](double y) {
    return kTop + plot_h - (y - ymin) / (ymax - ymin) * plot_h;
  };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty())
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">"
        << escape(title) << "</text>\n";

  // axes
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\""
      << kLeft + plot_w << "\" y2=\"" << kTop + plot_h
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n";

  double xstep = nice_step(xmax - xmin, 6);
  for (double x = std::ceil(xmin / xstep) * xstep; x <= xmax + 1e-9 * xstep;
       x += xstep) {
    out << "<line x1=\"" << fmt(px(x)) << "\" y1=\"" << kTop + plot_h
        << "\" x2=\"" << fmt(px(x)) << "\" y2=\"" << kTop + plot_h + 5
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(px(x)) << "\" y=\"" << kTop + plot_h + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << fmt(x) << "</text>\n";
  }
  double ystep = nice_step(ymax - ymin, 6);
  for (double y = std::ceil(ymin / ystep) * ystep; y <= ymax + 1e-9 * ystep;
       y += ystep) {
    out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << fmt(py(y)) << "\" x2=\""
        << kLeft << "\" y2=\"" << fmt(py(y)) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(py(y)) << "\" x2=\""
        << kLeft + plot_w << "\" y2=\"" << fmt(py(y))
        << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt(py(y) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << fmt(y) << "</text>\n";
  }

  out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">"
      << escape(x_label) << "</text>\n";
  out << "<text x=\"18\" y=\"" << kTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 18 "
      << kTop + plot_h / 2 << ")\">" << escape(y_label) << "</text>\n";

  for (size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (size_t p = 0; p < series[s].x.size(); ++p) {
      if (p) out << ' ';
      out << fmt(px(series[s].x[p])) << ',' << fmt(py(series[s].y[p]));
    }
    out << "\"/>\n";
  }

  // legend, top right of the plot area
  double lx = kLeft + plot_w - 170;
  double ly = kTop + 10;
  for (size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    out << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly + 18.0 * s)
        << "\" x2=\"" << fmt(lx + 24) << "\" y2=\"" << fmt(ly + 18.0 * s)
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << fmt(lx + 30) << "\" y=\"" << fmt(ly + 18.0 * s + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << escape(series[s].label) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace netpress

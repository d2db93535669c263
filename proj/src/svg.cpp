#include "moeq/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace moeq {

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"};

std::string f2(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

std::string g6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

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

}  // namespace

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<Series>& series,
                           int width, int height) {
  if (series.empty()) throw std::invalid_argument("line_chart_svg: no series");
  std::size_t n = 0;
  double ymin = 0.0, ymax = 0.0;
  bool first = true;
  for (const Series& s : series) {
    n = std::max(n, s.values.size());
    for (double v : s.values) {
      if (first) {
        ymin = ymax = v;
        first = false;
      }
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  if (n < 2) throw std::invalid_argument("line_chart_svg: need at least two points");
  double pad = 0.05 * (ymax - ymin);
  if (pad == 0.0) pad = 1.0;
  ymin -= pad;
  ymax += pad;

  const double ml = 70, mr = 20, mt = 40, mb = 50;
  const double pw = width - ml - mr, ph = height - mt - mb;
  auto px = [&](double i) { return ml + pw * (i / static_cast<double>(n - 1)); };
  auto py = [&](double v) { return mt + ph * (1.0 - (v - ymin) / (ymax - ymin)); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
    << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  o << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  o << "<text x=\"" << width / 2 << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\""
    << " text-anchor=\"middle\">" << escape(title) << "</text>\n";

  const int ticks = 5;
  o << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n";
  for (int t = 0; t <= ticks; ++t) {
    const double frac = static_cast<double>(t) / ticks;
    const double xv = frac * static_cast<double>(n - 1);
    const double yv = ymin + frac * (ymax - ymin);
    const std::string xs = f2(px(xv)), ys = f2(py(yv));
    o << "<line x1=\"" << xs << "\" y1=\"" << f2(mt) << "\" x2=\"" << xs << "\" y2=\""
      << f2(mt + ph) << "\" stroke=\"#dddddd\"/>\n";
    o << "<line x1=\"" << f2(ml) << "\" y1=\"" << ys << "\" x2=\"" << f2(ml + pw)
      << "\" y2=\"" << ys << "\" stroke=\"#dddddd\"/>\n";
    o << "<text x=\"" << xs << "\" y=\"" << f2(mt + ph + 16)
      << "\" text-anchor=\"middle\">" << g6(xv) << "</text>\n";
    o << "<text x=\"" << f2(ml - 6) << "\" y=\"" << f2(py(yv) + 4)
      << "\" text-anchor=\"end\">" << g6(yv) << "</text>\n";
  }
  o << "</g>\n";
  o << "<rect x=\"" << f2(ml) << "\" y=\"" << f2(mt) << "\" width=\"" << f2(pw)
    << "\" height=\"" << f2(ph) << "\" fill=\"none\" stroke=\"#333333\"/>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const Series& s = series[si];
    if (s.values.size() < 2) continue;
    const std::string color =
        s.color.empty() ? kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))] : s.color;
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      if (i) o << ' ';
      o << f2(px(static_cast<double>(i))) << ',' << f2(py(s.values[i]));
    }
    o << "\"/>\n";
  }

  o << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t si = 0; si < series.size(); ++si) {
    const Series& s = series[si];
    const std::string color =
        s.color.empty() ? kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))] : s.color;
    const double ly = mt + 8 + 18.0 * static_cast<double>(si);
    o << "<rect x=\"" << f2(ml + pw - 150) << "\" y=\"" << f2(ly) << "\" width=\"12\""
      << " height=\"12\" fill=\"" << color << "\"/>\n";
    o << "<text x=\"" << f2(ml + pw - 133) << "\" y=\"" << f2(ly + 10) << "\">"
      << escape(s.label) << "</text>\n";
  }
  o << "</g>\n";

  o << "<text x=\"" << f2(ml + pw / 2) << "\" y=\"" << f2(height - 12.0)
    << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">"
    << escape(x_label) << "</text>\n";
  o << "<text x=\"16\" y=\"" << f2(mt + ph / 2)
    << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\""
    << " transform=\"rotate(-90 16 " << f2(mt + ph / 2) << ")\">" << escape(y_label)
    << "</text>\n";
  o << "</svg>\n";
  return o.str();
}

}  // namespace moeq

#include "lamarck/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "lamarck/analysis.hpp"

namespace lamarck {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 70;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

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

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Axes {
  double x0, x1, y0, y1;

  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

void widen(double& lo, double& hi) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
}

void open(std::ostringstream& o, const PlotText& t) {
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(t.title)
    << "</text>\n";
}

void axes(std::ostringstream& o, const Axes& f, const PlotText& t, bool x_ticks) {
  const double bx = kLeft, by = kHeight - kBottom, ex = kWidth - kRight, ey = kTop;
  o << "<path d=\"M" << bx << ' ' << ey << " V" << by << " H" << ex << "\" stroke=\"black\" fill=\"none\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = f.y0 + (f.y1 - f.y0) * i / 4.0;
    o << "<text x=\"" << bx - 6 << "\" y=\"" << f.py(v) + 4 << "\" text-anchor=\"end\">" << num(v) << "</text>\n";
    if (x_ticks) {
      const double u = f.x0 + (f.x1 - f.x0) * i / 4.0;
      o << "<text x=\"" << f.px(u) << "\" y=\"" << by + 16 << "\" text-anchor=\"middle\">" << num(u) << "</text>\n";
    }
  }
  o << "<text x=\"" << (bx + ex) / 2 << "\" y=\"" << kHeight - 32 << "\" text-anchor=\"middle\">" << escape(t.x_label)
    << "</text>\n";
  o << "<text transform=\"translate(16," << (by + ey) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape(t.y_label) << "</text>\n";
  o << "<text x=\"8\" y=\"" << kHeight - 8 << "\" font-size=\"9\" fill=\"#555\">" << escape(t.footer) << "</text>\n";
}

void legend(std::ostringstream& o, std::size_t i, const std::string& label) {
  const double y = kTop + 18.0 * static_cast<double>(i);
  o << "<rect x=\"" << kWidth - kRight + 12 << "\" y=\"" << y << "\" width=\"12\" height=\"12\" fill=\""
    << kColors[i % 6] << "\"/>\n";
  o << "<text x=\"" << kWidth - kRight + 30 << "\" y=\"" << y + 10 << "\">" << escape(label) << "</text>\n";
}

}  // namespace

std::string svg_lines(const std::vector<Series>& series, const PlotText& text) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (double v : s.x) x0 = std::min(x0, v), x1 = std::max(x1, v);
    for (const auto* vs : {&s.y, &s.lo, &s.hi}) {
      for (double v : *vs) y0 = std::min(y0, v), y1 = std::max(y1, v);
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  widen(y0, y1);
  if (!(x1 > x0)) x1 = x0 + 1;
  const Axes f{x0, x1, y0, y1};
  std::ostringstream o;
  open(o, text);
  axes(o, f, text, true);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* c = kColors[i % 6];
    if (s.lo.size() == s.x.size() && s.hi.size() == s.x.size() && !s.x.empty()) {
      o << "<path fill=\"" << c << "\" fill-opacity=\"0.2\" stroke=\"none\" d=\"";
      for (std::size_t k = 0; k < s.x.size(); ++k) o << (k ? " L" : "M") << f.px(s.x[k]) << ' ' << f.py(s.hi[k]);
      for (std::size_t k = s.x.size(); k-- > 0;) o << " L" << f.px(s.x[k]) << ' ' << f.py(s.lo[k]);
      o << " Z\"/>\n";
    }
    o << "<path fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.6\" d=\"";
    for (std::size_t k = 0; k < s.x.size(); ++k) o << (k ? " L" : "M") << f.px(s.x[k]) << ' ' << f.py(s.y[k]);
    o << "\"/>\n";
    legend(o, i, s.label);
  }
  o << "</svg>\n";
  return o.str();
}

std::string svg_boxes(const std::vector<std::string>& groups, const std::vector<std::vector<double>>& values,
                      const PlotText& text) {
  double y0 = std::numeric_limits<double>::infinity(), y1 = -y0;
  for (const auto& v : values) {
    for (double x : v) y0 = std::min(y0, x), y1 = std::max(y1, x);
  }
  if (!std::isfinite(y0)) y0 = 0, y1 = 1;
  widen(y0, y1);
  const double n = static_cast<double>(std::max<std::size_t>(groups.size(), 1));
  const Axes f{0.0, n, y0, y1};
  std::ostringstream o;
  open(o, text);
  axes(o, f, text, false);
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const double cx = f.px(static_cast<double>(i) + 0.5);
    const double w = 0.3 * (f.px(1.0) - f.px(0.0));
    o << "<text x=\"" << cx << "\" y=\"" << kHeight - kBottom + 16 << "\" text-anchor=\"middle\">"
      << escape(groups[i]) << "</text>\n";
    if (values[i].empty()) continue;
    const auto& v = values[i];
    const double lo = *std::min_element(v.begin(), v.end()), hi = *std::max_element(v.begin(), v.end());
    const double q1 = quantile(v, 0.25), med = quantile(v, 0.5), q3 = quantile(v, 0.75);
    const char* c = kColors[i % 6];
    o << "<line x1=\"" << cx << "\" x2=\"" << cx << "\" y1=\"" << f.py(lo) << "\" y2=\"" << f.py(hi)
      << "\" stroke=\"" << c << "\"/>\n";
    o << "<rect x=\"" << cx - w / 2 << "\" y=\"" << f.py(q3) << "\" width=\"" << w << "\" height=\""
      << f.py(q1) - f.py(q3) << "\" fill=\"" << c << "\" fill-opacity=\"0.3\" stroke=\"" << c << "\"/>\n";
    o << "<line x1=\"" << cx - w / 2 << "\" x2=\"" << cx + w / 2 << "\" y1=\"" << f.py(med) << "\" y2=\""
      << f.py(med) << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string svg_bars(const std::vector<std::string>& categories, const std::vector<Series>& series,
                     const PlotText& text) {
  double y1 = 0.0;
  for (const auto& s : series) {
    for (double v : s.y) y1 = std::max(y1, v);
  }
  if (!(y1 > 0.0)) y1 = 1.0;
  const double n = static_cast<double>(std::max<std::size_t>(categories.size(), 1));
  const Axes f{0.0, n, 0.0, y1 * 1.05};
  std::ostringstream o;
  open(o, text);
  axes(o, f, text, false);
  const double slot = f.px(1.0) - f.px(0.0);
  const double bw = 0.8 * slot / static_cast<double>(std::max<std::size_t>(series.size(), 1));
  for (std::size_t c = 0; c < categories.size(); ++c) {
    o << "<text x=\"" << f.px(static_cast<double>(c) + 0.5) << "\" y=\"" << kHeight - kBottom + 16
      << "\" text-anchor=\"middle\">" << escape(categories[c]) << "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
      if (c >= series[s].y.size()) continue;
      const double x = f.px(static_cast<double>(c)) + 0.1 * slot + bw * static_cast<double>(s);
      o << "<rect x=\"" << x << "\" y=\"" << f.py(series[s].y[c]) << "\" width=\"" << bw << "\" height=\""
        << f.py(0.0) - f.py(series[s].y[c]) << "\" fill=\"" << kColors[s % 6] << "\"/>\n";
    }
  }
  for (std::size_t s = 0; s < series.size(); ++s) legend(o, s, series[s].label);
  o << "</svg>\n";
  return o.str();
}

}  // namespace lamarck

#include "hepasim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "hepasim/errors.hpp"

namespace hepasim::svg {
namespace {

std::string num(double v, const char* fmt = "%.3f") {
  char buf[48];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string escape(const std::string& s) {
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

void widen(double& lo, double& hi) {
  if (hi > lo) {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  } else {
    const double pad = lo == 0.0 ? 0.5 : 0.05 * std::abs(lo);
    lo -= pad;
    hi += pad;
  }
}

}  // namespace

double AxisMap::px(double x) const noexcept {
  return kLeft + (x - x_lo) / (x_hi - x_lo) * (kRight - kLeft);
}

double AxisMap::py(double y) const noexcept {
  return kBottom - (y - y_lo) / (y_hi - y_lo) * (kBottom - kTop);
}

LineChart::LineChart(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void LineChart::add_line(std::string id, std::string label, std::string color,
                         std::vector<double> x, std::vector<double> y) {
  if (x.size() != y.size() || x.empty()) throw InvalidArgument("series needs matching non-empty x and y");
  series_.push_back({std::move(id), std::move(label), std::move(color), std::move(x), std::move(y), false});
}

void LineChart::add_polygon(std::string id, std::string label, std::string color,
                            std::vector<double> x, std::vector<double> y) {
  if (x.size() != y.size() || x.size() < 3) throw InvalidArgument("polygon needs at least 3 vertices");
  series_.push_back({std::move(id), std::move(label), std::move(color), std::move(x), std::move(y), true});
}

AxisMap LineChart::axis_map() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  AxisMap m{inf, -inf, inf, -inf};
  for (const auto& s : series_) {
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      m.x_lo = std::min(m.x_lo, s.x[k]);
      m.x_hi = std::max(m.x_hi, s.x[k]);
      m.y_lo = std::min(m.y_lo, s.y[k]);
      m.y_hi = std::max(m.y_hi, s.y[k]);
    }
  }
  if (series_.empty()) return AxisMap{};
  widen(m.x_lo, m.x_hi);
  widen(m.y_lo, m.y_hi);
  return m;
}

std::string LineChart::render() const {
  const AxisMap m = axis_map();
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" height=\"600\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  os << "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" font-family=\"sans-serif\">"
     << escape(title_) << "</text>\n";
  os << "<rect id=\"frame\" x=\"" << AxisMap::kLeft << "\" y=\"" << AxisMap::kTop << "\" width=\""
     << AxisMap::kRight - AxisMap::kLeft << "\" height=\"" << AxisMap::kBottom - AxisMap::kTop
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  constexpr int kTicks = 5;
  os << "<g font-size=\"11\" font-family=\"sans-serif\">\n";
  for (int i = 0; i <= kTicks; ++i) {
    const double xv = m.x_lo + (m.x_hi - m.x_lo) * i / kTicks;
    const double yv = m.y_lo + (m.y_hi - m.y_lo) * i / kTicks;
    const double x = m.px(xv), y = m.py(yv);
    os << "<line x1=\"" << num(x) << "\" y1=\"" << AxisMap::kBottom << "\" x2=\"" << num(x) << "\" y2=\""
       << AxisMap::kBottom + 5 << "\" stroke=\"black\"/>"
       << "<text x=\"" << num(x) << "\" y=\"" << AxisMap::kBottom + 18 << "\" text-anchor=\"middle\">"
       << num(xv, "%.3g") << "</text>\n";
    os << "<line x1=\"" << AxisMap::kLeft - 5 << "\" y1=\"" << num(y) << "\" x2=\"" << AxisMap::kLeft
       << "\" y2=\"" << num(y) << "\" stroke=\"black\"/>"
       << "<text x=\"" << AxisMap::kLeft - 8 << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">"
       << num(yv, "%.3g") << "</text>\n";
  }
  os << "</g>\n";
  os << "<text x=\"" << (AxisMap::kLeft + AxisMap::kRight) / 2 << "\" y=\"570\" text-anchor=\"middle\" "
     << "font-size=\"13\" font-family=\"sans-serif\">" << escape(x_label_) << "</text>\n";
  os << "<text x=\"20\" y=\"" << (AxisMap::kTop + AxisMap::kBottom) / 2 << "\" text-anchor=\"middle\" "
     << "font-size=\"13\" font-family=\"sans-serif\" transform=\"rotate(-90 20 "
     << (AxisMap::kTop + AxisMap::kBottom) / 2 << ")\">" << escape(y_label_) << "</text>\n";

  for (const auto& s : series_) {
    os << '<' << (s.closed ? "polygon" : "polyline") << " id=\"" << escape(s.id) << "\" fill=\""
       << (s.closed ? s.color : std::string("none")) << "\"" << (s.closed ? " fill-opacity=\"0.15\"" : "")
       << " stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (k) os << ' ';
      os << num(m.px(s.x[k])) << ',' << num(m.py(s.y[k]));
    }
    os << "\"/>\n";
  }

  double legend_y = AxisMap::kTop + 16;
  for (const auto& s : series_) {
    os << "<line x1=\"" << AxisMap::kRight - 150 << "\" y1=\"" << legend_y << "\" x2=\""
       << AxisMap::kRight - 125 << "\" y2=\"" << legend_y << "\" stroke=\"" << s.color
       << "\" stroke-width=\"2\"/><text x=\"" << AxisMap::kRight - 118 << "\" y=\"" << legend_y + 4
       << "\" font-size=\"12\" font-family=\"sans-serif\">" << escape(s.label) << "</text>\n";
    legend_y += 18;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace hepasim::svg

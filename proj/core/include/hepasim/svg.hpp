#pragma once

#include <string>
#include <vector>

namespace hepasim::svg {

/// Linear map from data coordinates onto the fixed 800x600 viewbox.
///
/// The data box is the union of all series, widened by 5% of its span on each
/// side (a zero span is widened to +-0.5, or +-5% of |value| when nonzero).
/// It maps onto the plot area x in [80, 770], y in [40, 530] with y pointing up.
struct AxisMap {
  double x_lo = 0.0, x_hi = 1.0;
  double y_lo = 0.0, y_hi = 1.0;

  static constexpr double kWidth = 800.0;
  static constexpr double kHeight = 600.0;
  static constexpr double kLeft = 80.0;
  static constexpr double kRight = 770.0;
  static constexpr double kTop = 40.0;
  static constexpr double kBottom = 530.0;

  double px(double x) const noexcept;
  double py(double y) const noexcept;
};

struct Series {
  std::string id;
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
  bool closed = false;  // polygon instead of polyline
};

class LineChart {
 public:
  LineChart(std::string title, std::string x_label, std::string y_label);

  void add_line(std::string id, std::string label, std::string color, std::vector<double> x,
                std::vector<double> y);
  void add_polygon(std::string id, std::string label, std::string color, std::vector<double> x,
                   std::vector<double> y);

  AxisMap axis_map() const;
  std::string render() const;

 private:
  std::string title_;
  std::string x_label_;
  std::string y_label_;
  std::vector<Series> series_;
};

}  // namespace hepasim::svg

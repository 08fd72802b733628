#pragma once

#include <string>
#include <utility>
#include <vector>

namespace modent::cli::svg {

struct Axis {
  std::string label;
  bool log = false;  ///< base-10; every coordinate must be positive
};

/// Standalone SVG document; markers joined by a polyline, in the given order.
std::string line_chart(const std::string& title, const std::vector<std::pair<double, double>>& points,
                       const Axis& x, const Axis& y);

/// values[i * ys.size() + j] is drawn at (xs[i], ys[j]).
std::string heatmap(const std::string& title, const std::vector<double>& xs, const std::vector<double>& ys,
                    const std::vector<double>& values, const std::string& x_label, const std::string& y_label);

}  // namespace modent::cli::svg

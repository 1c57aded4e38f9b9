#pragma once

#include "ancient/geometry.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace ancient {

/// Dirichlet data (u at the first and last grid point) as a function of time.
using GraphBoundary = std::function<std::pair<double, double>(double t)>;

/// A curve x = u(y) sampled on an increasing y-grid.
struct GraphCurve {
  std::vector<double> grid;  ///< y_i rounded to doubles
  std::vector<double> values;
  double time = 0.0;
  GraphBoundary boundary;
  /// Optional exact grid y_i = anchors[i] + offsets[i]. Keeps offsets far
  /// below the spacing of doubles near an anchor, where grid[] may repeat.
  std::vector<double> anchors;
  std::vector<double> offsets;

  std::size_t size() const { return grid.size(); }
  /// y_{i+1} - y_i, from the exact form when present.
  double gap(std::size_t i) const;
};

/// Uniform grid with `count` points on [lo, hi].
std::vector<double> uniform_grid(double lo, double hi, std::size_t count);

/// Grid on [heights.front(), heights.back()] (ascending heights) with spacing
/// at most h, refined geometrically by `ratio` down to offset `inner` on both
/// sides of every interior height and to `outer` at the two ends. The ratio
/// is raised to 1 + 4h/w on strips of width w too narrow for it. Values are
/// left empty.
GraphCurve graded_grid(const std::vector<double> &heights, double h, double inner, double outer,
                       double ratio = 1.01);

/// Vertices (u(y_i), y_i) in grid order.
PolyCurve to_polyline(const GraphCurve &g);

} // namespace ancient

#include "ancient/geometry.hpp"
#include "ancient/graph.hpp"

#include <algorithm>
#include <cmath>

namespace ancient {

double length(const PolyCurve &c) {
  double sum = 0.0;
  for (std::size_t i = 0; i < c.edge_count(); ++i) sum += norm(c.edge(i));
  return sum;
}

std::vector<double> turning_angles(const PolyCurve &c) {
  const std::size_t n = c.size();
  std::vector<double> out(n, 0.0);
  if (n < 3) return out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!c.closed && (i == 0 || i + 1 == n)) continue;
    const Vec2 a = c.points[i] - c.points[(i + n - 1) % n];
    const Vec2 b = c.points[(i + 1) % n] - c.points[i];
    out[i] = std::atan2(cross(a, b), dot(a, b));
  }
  return out;
}

PolyCurve reversed(const PolyCurve &c) {
  PolyCurve r = c;
  std::reverse(r.points.begin(), r.points.end());
  if (c.closed && !r.points.empty())
    std::rotate(r.points.begin(), r.points.end() - 1, r.points.end());
  return r;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t count) {
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return g;
}

double GraphCurve::gap(std::size_t i) const {
  if (anchors.empty()) return grid[i + 1] - grid[i];
  if (anchors[i] == anchors[i + 1]) return offsets[i + 1] - offsets[i];
  return (anchors[i + 1] - anchors[i]) + (offsets[i + 1] - offsets[i]);
}

namespace {

// Offsets from one edge of a strip, starting at x with the given first step;
// steps grow by `ratio` while they stay below h.
std::vector<double> side_offsets(double x, double step, double h, double ratio) {
  std::vector<double> o{x};
  for (; step < h; step *= ratio) o.push_back(x += step);
  return o;
}

} // namespace

GraphCurve graded_grid(const std::vector<double> &heights, double h, double inner, double outer, double ratio) {
  if (heights.size() < 2 || !(h > 0) || !(inner > 0) || !(outer > 0) || !(ratio > 1))
    throw LabError("graded_grid: invalid arguments");
  GraphCurve g;
  const std::size_t n = heights.size() - 1;
  auto push = [&g](double anchor, double offset) {
    g.anchors.push_back(anchor);
    g.offsets.push_back(offset);
  };
  for (std::size_t k = 0; k < n; ++k) {
    const double lo = heights[k], hi = heights[k + 1];
    if (!(hi > lo)) throw LabError("graded_grid: heights must increase");
    const double w = hi - lo;
    // Coarse grids grade faster so the graded ends fit in the strip.
    const double r = std::max(ratio, 1.0 + 4.0 * h / w);
    // Across an interior height the gap is 2 inner and grows from there; at
    // the two ends the offsets themselves grow geometrically from `outer`.
    const auto below = k > 0 ? side_offsets(inner, 2 * inner * r, h, r) : side_offsets(outer, outer * (r - 1.0), h, r);
    const auto above =
        k + 1 < n ? side_offsets(inner, 2 * inner * r, h, r) : side_offsets(outer, outer * (r - 1.0), h, r);
    const double rest = w - below.back() - above.back();
    if (!(rest > 0)) throw LabError("graded_grid: strip narrower than its graded ends");
    for (double o : below) push(lo, o);
    const auto m = static_cast<std::size_t>(std::ceil(rest / h));
    const double step = rest / static_cast<double>(m);
    // Middle points anchored to the nearer edge.
    for (std::size_t i = 1; i < m; ++i) {
      const double o = below.back() + step * static_cast<double>(i);
      if (o <= 0.5 * w) push(lo, o);
      else push(hi, o - w);
    }
    for (auto it = above.rbegin(); it != above.rend(); ++it) push(hi, -*it);
  }
  for (std::size_t i = 0; i < g.anchors.size(); ++i) g.grid.push_back(g.anchors[i] + g.offsets[i]);
  return g;
}

PolyCurve to_polyline(const GraphCurve &g) {
  PolyCurve c;
  c.points.reserve(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) c.points.push_back({g.values[i], g.grid[i]});
  return c;
}

} // namespace ancient

#include "ancient/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

namespace ancient {

namespace {

Vec2 unit(Vec2 v) {
  const double n = norm(v);
  return {v.x / n, v.y / n};
}

int sign_of(double v) { return v < 0.0 ? -1 : 1; }

Vec2 point_at(const PolyCurve &c, double param) {
  const std::size_t n = c.size();
  auto i = static_cast<std::size_t>(std::floor(param));
  double f = param - static_cast<double>(i);
  if (i >= c.edge_count()) {
    i = c.edge_count() - 1;
    f = 1.0;
  }
  const Vec2 a = c.points[i];
  const Vec2 b = c.points[(i + 1) % n];
  return f == 0.0 ? a : a + f * (b - a);
}

double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double f = len2 > 0 ? dot(p - a, ab) / len2 : 0.0;
  f = std::clamp(f, 0.0, 1.0);
  return norm(p - (a + f * ab));
}

} // namespace

double line_integral_area(const PolyCurve &c) {
  double sum = 0.0;
  for (std::size_t i = 0; i < c.edge_count(); ++i) {
    const Vec2 a = c.points[i];
    const Vec2 b = c.points[(i + 1) % c.size()];
    sum += 0.5 * (a.x + b.x) * (b.y - a.y);
  }
  return sum;
}

AreaReport area_between(const PolyCurve &a, const PolyCurve &b) {
  AreaReport r;
  if (a.closed != b.closed) throw OrientationError("area_between: one curve closed, the other open");
  if (a.size() < 2 || b.size() < 2) throw OrientationError("area_between: curve with fewer than two points");
  if (a.closed) {
    r.value = line_integral_area(a) - line_integral_area(b);
    return r;
  }
  PolyCurve circuit{a.points, true};
  circuit.points.insert(circuit.points.end(), b.points.rbegin(), b.points.rend());
  if (length(circuit) == 0.0) throw OrientationError("area_between: degenerate circuit");
  r.value = line_integral_area(circuit);
  return r;
}

AreaReport area_between(const PolyCurve &a, const PolyCurve &b, const PolyCurve &a_prev,
                        const PolyCurve &b_prev, double dt) {
  if (!(dt > 0)) throw LabError("area_between: dt must be positive");
  AreaReport r = area_between(a, b);
  r.rate = (r.value - area_between(a_prev, b_prev).value) / dt;
  return r;
}

std::vector<double> derivative(const std::vector<double> &t, const std::vector<double> &v) {
  if (t.size() != v.size() || t.size() < 2) throw LabError("derivative: need two or more samples");
  const std::size_t n = t.size();
  std::vector<double> d(n);
  d[0] = (v[1] - v[0]) / (t[1] - t[0]);
  d[n - 1] = (v[n - 1] - v[n - 2]) / (t[n - 1] - t[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / (t[i + 1] - t[i - 1]);
  return d;
}

double predicted_area_rate_convex(const std::vector<Corner> &corners) {
  double s = 0.0;
  for (const auto &c : corners) s += corner_angle(c);
  return s;
}

CrossingReport crossings_and_tangents(const PolyCurve &c) {
  CrossingReport out;
  const std::size_t ne = c.edge_count();
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < ne; ++i) {
    const Vec2 a = c.points[i];
    const Vec2 b = c.points[(i + 1) % n];
    if (sign_of(a.x) != sign_of(b.x)) {
      const double f = a.x / (a.x - b.x);
      out.crossings.push_back({{0.0, a.y + f * (b.y - a.y)}, static_cast<double>(i) + f});
    }
  }
  const std::size_t pairs = c.closed ? ne : (ne == 0 ? 0 : ne - 1);
  for (std::size_t i = 0; i < pairs; ++i) {
    const std::size_t j = (i + 1) % ne;
    const Vec2 ti = unit(c.edge(i));
    const Vec2 tj = unit(c.edge(j));
    if (sign_of(ti.x) != sign_of(tj.x)) {
      const double f = ti.x / (ti.x - tj.x);
      const Vec2 mi = c.points[i] + 0.5 * c.edge(i);
      const Vec2 mj = c.points[j] + 0.5 * c.edge(j);
      double param = static_cast<double>(i) + 0.5 + f;
      if (param >= static_cast<double>(ne)) param -= static_cast<double>(ne);
      out.vertical_tangents.push_back({mi + f * (mj - mi), param});
    }
  }
  return out;
}

PolyCurve sub_curve(const PolyCurve &c, double from, double to) {
  const std::size_t n = c.size();
  const double span = static_cast<double>(c.edge_count());
  if (n < 2 || from < 0 || to < 0 || from > span || to > span)
    throw LabError("sub_curve: parameter outside the curve");
  if (from > to && !c.closed) throw LabError("sub_curve: reversed range on an open curve");
  PolyCurve out;
  out.points.push_back(point_at(c, from));
  const double end = from <= to ? to : to + span;
  for (auto k = static_cast<std::size_t>(std::floor(from)) + 1; static_cast<double>(k) < end; ++k)
    out.points.push_back(c.points[k % n]);
  const Vec2 last = point_at(c, to);
  if (norm(last - out.points.back()) > 0.0 || out.points.size() == 1) out.points.push_back(last);
  return out;
}

Vec2 tangent_at(const PolyCurve &c, double param) {
  if (c.edge_count() == 0) throw LabError("tangent_at: curve has no edges");
  auto i = static_cast<std::size_t>(std::max(0.0, std::floor(param)));
  i = std::min(i, c.edge_count() - 1);
  return unit(c.edge(i));
}

PolyCurve soliton_tip_arc(const ReaperSpec &r, double t, double h) {
  double eta = 0.0;
  try {
    eta = offset_of_x(r, 0.0, t);
  } catch (const DomainError &) {
    throw CrossingNotFound("soliton does not cross the y-axis");
  }
  if (!(eta < 0.5 * r.width())) throw CrossingNotFound("soliton tip sits on the y-axis");
  const double s0 = arclength_at_offset(r, Branch::Lower, eta);
  const double s1 = -s0;
  const auto m = std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil((s1 - s0) / h)));
  PolyCurve out;
  out.points.push_back({0.0, r.low + eta});
  for (std::size_t i = 1; i < m; ++i) {
    const double s = s0 + (s1 - s0) * static_cast<double>(i) / static_cast<double>(m);
    out.points.push_back(point_at_arclength(r, s, t).position);
  }
  out.points.push_back({0.0, r.high - eta});
  return out;
}

AxisAngles axis_angles(const PolyCurve &arc, const ReaperSpec &r, double t, double h) {
  if (arc.size() < 2 || arc.closed) throw CrossingNotFound("axis_angles: need an open arc");
  const PolyCurve a = arc.points.front().y <= arc.points.back().y ? arc : reversed(arc);
  const PolyCurve b = soliton_tip_arc(r, t, h);
  const double eta = b.points.front().y - r.low;
  const double s0 = arclength_at_offset(r, Branch::Lower, eta);
  const Vec2 tb0 = point_at_arclength(r, s0, t).tangent;
  const Vec2 tb1 = point_at_arclength(r, -s0, t).tangent;
  const Vec2 ta0 = tangent_at(a, 0.0);
  const Vec2 ta1 = tangent_at(a, static_cast<double>(a.edge_count()) - 0.5);

  const double up = b.points.back().y - a.points.back().y;
  const double down = a.points.front().y - b.points.front().y;
  if (up == 0.0 || down == 0.0) throw OrientationError("axis_angles: connector of zero length");
  const Vec2 c1{0.0, up > 0 ? 1.0 : -1.0};
  const Vec2 c2{0.0, down > 0 ? 1.0 : -1.0};

  const double area = area_between(a, b).value;
  if (area == 0.0) throw OrientationError("axis_angles: region has zero area");
  const double o = area > 0 ? 1.0 : -1.0;
  auto defect = [o](Vec2 in, Vec2 out) {
    return o * std::atan2(cross(in, out), dot(in, out)) - 0.5 * kPi;
  };
  AxisAngles ang;
  ang.theta4 = -defect(ta1, c1);
  ang.theta3 = defect(c1, Vec2{-tb1.x, -tb1.y});
  ang.theta2 = defect(Vec2{-tb0.x, -tb0.y}, c2);
  ang.theta1 = -defect(c2, ta0);
  ang.area = std::abs(area);
  return ang;
}

double total_curvature(const PolyCurve &c) {
  double k = 0.0;
  for (double a : turning_angles(c)) k += std::abs(a);
  return k;
}

std::vector<double> discrete_curvature(const PolyCurve &c) {
  const auto turn = turning_angles(c);
  const std::size_t n = c.size();
  std::vector<double> k(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!c.closed && (i == 0 || i + 1 == n)) continue;
    const double lp = norm(c.points[i] - c.points[(i + n - 1) % n]);
    const double ln = norm(c.points[(i + 1) % n] - c.points[i]);
    k[i] = 2.0 * turn[i] / (lp + ln);
  }
  return k;
}

double inflection_dissipation(const PolyCurve &c, double threshold) {
  const auto k = discrete_curvature(c);
  const std::size_t n = c.size();
  std::vector<std::size_t> sig;
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(k[i]) > threshold) sig.push_back(i);
  if (sig.size() < 2) return 0.0;
  // Arclength position of every vertex.
  std::vector<double> s(n + 1, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) s[i + 1] = s[i] + norm(c.points[i + 1] - c.points[i]);
  const double total = length(c);
  double sum = 0.0;
  const std::size_t pairs = c.closed ? sig.size() : sig.size() - 1;
  for (std::size_t q = 0; q < pairs; ++q) {
    const std::size_t i = sig[q];
    const std::size_t j = sig[(q + 1) % sig.size()];
    if ((k[i] > 0) == (k[j] > 0)) continue;
    double ds = s[j] - s[i];
    if (ds <= 0) ds += total;
    sum += std::abs(k[j] - k[i]) / ds;
  }
  return -2.0 * sum;
}

std::vector<DissipationSample> curvature_dissipation(const FlowRun &run, double threshold) {
  const std::size_t n = run.states.size();
  if (n < 3) throw LabError("curvature_dissipation: need at least three snapshots");
  std::vector<double> k(n);
  for (std::size_t i = 0; i < n; ++i) k[i] = total_curvature(run.states[i]);
  std::vector<DissipationSample> out;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    DissipationSample d;
    d.time = run.snapshot_times[i];
    d.measured = (k[i + 1] - k[i - 1]) / (run.snapshot_times[i + 1] - run.snapshot_times[i - 1]);
    d.predicted = inflection_dissipation(run.states[i], threshold);
    out.push_back(d);
  }
  return out;
}

double strip_distance(const PolyCurve &c, const PolyCurve &ref) {
  if (c.size() == 0) return 0.0;
  if (ref.size() == 0) throw LabError("strip_distance: empty reference");
  const std::size_t ne = ref.edge_count();
  if (ne == 0) {
    double d = 0.0;
    for (Vec2 p : c.points) d = std::max(d, norm(p - ref.points[0]));
    return d;
  }

  double cell = 0.0;
  double xmin = INFINITY, ymin = INFINITY, xmax = -INFINITY, ymax = -INFINITY;
  for (std::size_t i = 0; i < ne; ++i) cell = std::max(cell, norm(ref.edge(i)));
  for (Vec2 p : ref.points) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  cell = std::max(cell, 1e-12 * std::max({1.0, xmax - xmin, ymax - ymin}));
  auto cell_of = [&](double x, double y) {
    return std::pair<std::int64_t, std::int64_t>{static_cast<std::int64_t>(std::floor((x - xmin) / cell)),
                                                 static_cast<std::int64_t>(std::floor((y - ymin) / cell))};
  };
  auto key = [](std::int64_t i, std::int64_t j) { return (i << 32) ^ (j & 0xffffffff); };
  std::unordered_map<std::int64_t, std::vector<std::size_t>> grid;
  for (std::size_t e = 0; e < ne; ++e) {
    const Vec2 a = ref.points[e];
    const Vec2 b = ref.points[(e + 1) % ref.size()];
    const auto [i0, j0] = cell_of(std::min(a.x, b.x), std::min(a.y, b.y));
    const auto [i1, j1] = cell_of(std::max(a.x, b.x), std::max(a.y, b.y));
    for (auto i = i0; i <= i1; ++i)
      for (auto j = j0; j <= j1; ++j) grid[key(i, j)].push_back(e);
  }
  const auto [gi1, gj1] = cell_of(xmax, ymax);
  const std::int64_t extent = std::max(gi1, gj1) + 2;

  double worst = 0.0;
  for (Vec2 p : c.points) {
    const auto [ci, cj] = cell_of(p.x, p.y);
    double best = INFINITY;
    // Cells at Chebyshev ring r are at least (r - 1) cells away.
    const std::int64_t far = std::max<std::int64_t>({std::abs(ci), std::abs(cj), std::abs(ci - gi1),
                                                     std::abs(cj - gj1)}) + extent;
    for (std::int64_t r = 0; r <= far; ++r) {
      for (std::int64_t i = ci - r; i <= ci + r; ++i) {
        for (std::int64_t j = cj - r; j <= cj + r; ++j) {
          if (std::max(std::abs(i - ci), std::abs(j - cj)) != r) continue;
          auto it = grid.find(key(i, j));
          if (it == grid.end()) continue;
          for (std::size_t e : it->second)
            best = std::min(best, segment_distance(p, ref.points[e], ref.points[(e + 1) % ref.size()]));
        }
      }
      if (best <= static_cast<double>(r) * cell) break;
      if (r == 64) {
        for (std::size_t e = 0; e < ne; ++e)
          best = std::min(best, segment_distance(p, ref.points[e], ref.points[(e + 1) % ref.size()]));
        break;
      }
    }
    worst = std::max(worst, best);
  }
  return worst;
}

RateFit fit_rate(const std::vector<std::pair<double, double>> &samples, double floor) {
  RateFit fit;
  for (const auto &s : samples)
    if (s.second > floor && std::isfinite(s.second)) fit.samples.push_back(s);
  const std::size_t n = fit.samples.size();
  if (n < 3) throw DegenerateFit("fit_rate: fewer than three samples above the floor");
  double st = 0, sl = 0;
  for (const auto &[t, v] : fit.samples) {
    st += t;
    sl += std::log(v);
  }
  const double mt = st / static_cast<double>(n), ml = sl / static_cast<double>(n);
  double stt = 0, stl = 0;
  for (const auto &[t, v] : fit.samples) {
    stt += (t - mt) * (t - mt);
    stl += (t - mt) * (std::log(v) - ml);
  }
  if (!(stt > 0)) throw DegenerateFit("fit_rate: all samples at the same time");
  fit.delta = stl / stt;
  fit.log_intercept = ml - fit.delta * mt;
  double ss = 0;
  for (const auto &[t, v] : fit.samples) {
    const double e = std::log(v) - (fit.log_intercept + fit.delta * t);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(n));
  return fit;
}

} // namespace ancient

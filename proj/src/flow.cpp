#include "ancient/flow.hpp"

#include "tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ancient {

namespace {

Vec2 unit(Vec2 v) {
  const double n = norm(v);
  return {v.x / n, v.y / n};
}

double min_edge(const PolyCurve &c) {
  double m = INFINITY;
  for (std::size_t i = 0; i < c.edge_count(); ++i) m = std::min(m, norm(c.edge(i)));
  return m;
}

double max_edge(const PolyCurve &c) {
  double m = 0.0;
  for (std::size_t i = 0; i < c.edge_count(); ++i) m = std::max(m, norm(c.edge(i)));
  return m;
}

bool all_finite(const PolyCurve &c) {
  return std::all_of(c.points.begin(), c.points.end(),
                     [](Vec2 p) { return std::isfinite(p.x) && std::isfinite(p.y); });
}

// Explicit stability needs dt <= l^2 / 2 for the shortest edge l.
bool distorted(const PolyCurve &c, const FlowParams &p) {
  const double lo = min_edge(c);
  const double hi = max_edge(c);
  if (lo < 0.5 * p.h || hi > 2.0 * p.h) return true;
  return p.scheme == Scheme::Explicit && lo * lo < 2.2 * p.dt;
}

PolyCurve redistribute(const PolyCurve &c, const FlowParams &p) {
  switch (p.redistribution) {
  case Redistribution::EveryStep: return resample(c, p.h);
  case Redistribution::WhenDistorted: return distorted(c, p) ? resample(c, p.h) : c;
  case Redistribution::Never: return c;
  }
  return c;
}

// Splices a circular arc over vertex i of an open polyline.
void round_at(std::vector<Vec2> &pts, std::size_t i, double r, double h) {
  if (i == 0 || i + 1 >= pts.size()) return;
  const Vec2 a = unit(pts[i] - pts[i - 1]);
  const Vec2 b = unit(pts[i + 1] - pts[i]);
  const double theta = std::atan2(cross(a, b), dot(a, b));
  // An arc shorter than one sample would only leave tiny edges behind.
  if (r * std::abs(theta) < h) return;
  const double d = r * std::tan(0.5 * std::abs(theta));

  // Slack so a tangent point landing on a vertex does not leave a
  // vanishing edge behind.
  const double slack = 1e-9 * h;
  std::size_t j = i;
  double rem = d;
  while (j > 0 && norm(pts[j] - pts[j - 1]) < rem + slack) {
    rem -= norm(pts[j] - pts[j - 1]);
    --j;
  }
  const Vec2 p1 = j > 0 ? pts[j] - rem * unit(pts[j] - pts[j - 1]) : pts[0];

  std::size_t k = i;
  rem = d;
  while (k + 1 < pts.size() && norm(pts[k + 1] - pts[k]) < rem + slack) {
    rem -= norm(pts[k + 1] - pts[k]);
    ++k;
  }
  const Vec2 p2 = k + 1 < pts.size() ? pts[k] + rem * unit(pts[k + 1] - pts[k]) : pts.back();

  const double sgn = theta > 0 ? 1.0 : -1.0;
  const Vec2 centre = p1 + r * Vec2{-a.y * sgn, a.x * sgn};
  const std::size_t m = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(r * std::abs(theta) / h)));

  std::vector<Vec2> out(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(j));
  if (j > 0) out.push_back(p1);
  const Vec2 rel = p1 - centre;
  for (std::size_t q = 1; q < m; ++q) {
    const double phi = theta * static_cast<double>(q) / static_cast<double>(m);
    const double cs = std::cos(phi), sn = std::sin(phi);
    out.push_back(centre + Vec2{cs * rel.x - sn * rel.y, sn * rel.x + cs * rel.y});
  }
  if (k + 1 < pts.size()) out.push_back(p2);
  out.insert(out.end(), pts.begin() + static_cast<std::ptrdiff_t>(k + 1), pts.end());
  pts = std::move(out);
}

} // namespace

double mollify_radius(const FlowParams &p) { return p.mollify_radius > 0 ? p.mollify_radius : 5.0 * p.h; }

void check_params(const FlowParams &p) {
  if (!(p.dt > 0) || !std::isfinite(p.dt)) throw LabError("flow: dt must be positive");
  if (!(p.h > 0) || !std::isfinite(p.h)) throw LabError("flow: h must be positive");
  if (!(p.end_time >= p.start_time)) throw LabError("flow: end time precedes start time");
  if (p.scheme == Scheme::Explicit && p.dt > 0.4 * p.h * p.h * (1 + 1e-12)) {
    std::ostringstream os;
    os << "flow: explicit step dt = " << p.dt << " exceeds 0.4 h^2 = " << 0.4 * p.h * p.h;
    throw LabError(os.str());
  }
}

Diagnostics diagnose(const PolyCurve &c) {
  Diagnostics d;
  d.length = length(c);
  const auto turn = turning_angles(c);
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::abs(turn[i]);
    d.total_curvature += a;
    if (!c.closed && (i == 0 || i + 1 == n)) continue;
    const double lp = norm(c.points[i] - c.points[(i + n - 1) % n]);
    const double ln = norm(c.points[(i + 1) % n] - c.points[i]);
    d.max_curvature = std::max(d.max_curvature, 2.0 * a / (lp + ln));
  }
  return d;
}

PolyCurve step_parametric(const PolyCurve &c, double dt, double h, Scheme scheme, const OpenEnds &ends) {
  const std::size_t n = c.size();
  if (n < (c.closed ? 3u : 2u)) throw StabilityError("flow: too few vertices", 0.0);
  const double lmin = min_edge(c);
  if (!(lmin >= 1e-3 * h)) {
    std::ostringstream os;
    os << "flow: edge length " << lmin << " below 1e-3 h";
    throw StabilityError(os.str(), 0.0);
  }
  if (scheme == Scheme::Explicit && dt > 0.5 * lmin * lmin) {
    std::ostringstream os;
    os << "flow: explicit step " << dt << " unstable for edge " << lmin;
    throw StabilityError(os.str(), 0.0);
  }

  const auto &p = c.points;
  std::vector<double> len(c.edge_count());
  for (std::size_t i = 0; i < len.size(); ++i) len[i] = norm(c.edge(i));

  PolyCurve out{p, c.closed};
  if (scheme == Scheme::Explicit) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!c.closed && (i == 0 || i + 1 == n)) continue;
      const std::size_t ip = (i + n - 1) % n;
      const double lp = len[ip], ln = len[i];
      const Vec2 tp = (p[i] - p[ip]) * (1.0 / lp);
      const Vec2 tn = (p[(i + 1) % n] - p[i]) * (1.0 / ln);
      out.points[i] += (2.0 * dt / (lp + ln)) * (tn - tp);
    }
  } else {
    std::vector<double> lo(n, 0.0), di(n, 1.0), up(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (!c.closed && (i == 0 || i + 1 == n)) continue;
      const double lp = len[(i + n - 1) % n], ln = len[i];
      const double alpha = 2.0 * dt / ((lp + ln) * lp);
      const double beta = 2.0 * dt / ((lp + ln) * ln);
      lo[i] = -alpha;
      up[i] = -beta;
      di[i] = 1.0 + alpha + beta;
    }
    std::vector<Vec2> rhs = p;
    if (c.closed) {
      out.points = detail::solve_cyclic(lo, di, up, rhs);
    } else {
      out.points = detail::solve_tridiagonal(lo, di, up, rhs);
    }
  }
  if (!c.closed) {
    out.points.front() = p.front() + dt * ends.head_velocity;
    out.points.back() = p.back() + dt * ends.tail_velocity;
  }
  if (!all_finite(out)) throw StabilityError("flow: non-finite vertex", 0.0);
  if (!(min_edge(out) >= 1e-3 * h)) throw StabilityError("flow: edge collapsed below 1e-3 h", 0.0);
  return out;
}

GraphCurve step_graph(const GraphCurve &g, double dt) {
  const std::size_t n = g.size();
  if (n < 3) throw SolveError("graph flow: need at least three grid points");
  const auto &u = g.values;
  // u_t = (atan u_y)_y, linearly implicit in the increment. The explicit part is
  // the turning angle between adjacent faces, from atan2 so that steep faces keep
  // their small differences.
  std::vector<double> lo(n, 0.0), ex(n, 1.0), up(n, 0.0), rhs(n, 0.0);
  std::vector<double> w(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = g.gap(i), s = (u[i + 1] - u[i]) / h;
    w[i] = 1.0 / (h * (1.0 + s * s));
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = g.gap(i - 1), hp = g.gap(i);
    const double dm = u[i] - u[i - 1], dp = u[i + 1] - u[i];
    const double turn = std::atan2(hm * dp - hp * dm, hm * hp + dm * dp);
    const double c = 2.0 * dt / (hm + hp);
    lo[i] = c * w[i - 1];
    up[i] = c * w[i];
    rhs[i] = c * turn;
  }
  if (g.boundary) {
    const auto [first, last] = g.boundary(g.time + dt);
    rhs.front() = first - u.front();
    rhs.back() = last - u.back();
  }
  const auto inc = detail::solve_m_matrix(lo, ex, up, rhs);
  GraphCurve out = g;
  for (std::size_t i = 0; i < n; ++i) out.values[i] = u[i] + inc[i];
  out.time = g.time + dt;
  for (double v : out.values)
    if (!std::isfinite(v)) throw SolveError("graph flow: singular system");
  return out;
}

PolyCurve resample(const PolyCurve &c, double h) {
  if (!(h > 0)) throw LabError("resample: h must be positive");
  const std::size_t ne = c.edge_count();
  if (ne == 0) return c;
  const std::size_t n = c.size();
  std::vector<double> len(ne), cum(ne + 1, 0.0);
  for (std::size_t i = 0; i < ne; ++i) {
    len[i] = norm(c.edge(i));
    cum[i + 1] = cum[i] + len[i];
  }
  const double total = cum.back();
  const std::size_t floor_count = c.closed ? 8 : 1;
  const std::size_t m = std::max(floor_count, static_cast<std::size_t>(std::floor(total / h)));
  const double spacing = total / static_cast<double>(m);

  // Arclength derivative at each vertex from the three-point formula on a
  // nonuniform grid; one-sided at open ends.
  std::vector<Vec2> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool end = !c.closed && (i == 0 || i + 1 == n);
    if (end) {
      const std::size_t e = i == 0 ? 0 : ne - 1;
      d[i] = len[e] > 0 ? c.edge(e) * (1.0 / len[e]) : Vec2{};
      continue;
    }
    const std::size_t ip = (i + n - 1) % n;
    const double a = len[ip], b = len[i];
    if (a <= 0 || b <= 0) continue;
    d[i] = c.edge(ip) * (b / (a * (a + b))) + c.edge(i) * (a / (b * (a + b)));
  }

  PolyCurve out;
  out.closed = c.closed;
  out.points.reserve(m + 1);
  std::size_t seg = 0;
  const std::size_t count = c.closed ? m : m + 1;
  for (std::size_t k = 0; k < count; ++k) {
    if (!c.closed && k == m) {
      out.points.push_back(c.points.back());
      break;
    }
    const double s = spacing * static_cast<double>(k);
    while (seg + 1 < ne && cum[seg + 1] <= s) ++seg;
    const double l = len[seg];
    const double f = l > 0 ? (s - cum[seg]) / l : 0.0;
    const Vec2 a = c.points[seg];
    const Vec2 b = c.points[(seg + 1) % n];
    if (f == 0.0) {
      out.points.push_back(a);
      continue;
    }
    // Cubic Hermite in the arclength parameter of the segment.
    const double f2 = f * f, f3 = f2 * f;
    const double h00 = 2 * f3 - 3 * f2 + 1, h10 = f3 - 2 * f2 + f;
    const double h01 = -2 * f3 + 3 * f2, h11 = f3 - f2;
    out.points.push_back(h00 * a + (h10 * l) * d[seg] + h01 * b + (h11 * l) * d[(seg + 1) % n]);
  }
  return out;
}

std::size_t nearest_vertex(const PolyCurve &c, Vec2 p) {
  std::size_t best = 0;
  double bd = INFINITY;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double d = norm(c.points[i] - p);
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return best;
}

PolyCurve round_corners(const PolyCurve &c, const std::vector<std::size_t> &vertices, double radius,
                        double h) {
  if (!(radius > 0) || !(h > 0)) throw LabError("round_corners: radius and h must be positive");
  std::vector<Vec2> targets;
  for (std::size_t i : vertices) {
    if (i >= c.size()) throw LabError("round_corners: vertex index out of range");
    targets.push_back(c.points[i]);
  }
  PolyCurve out = c;
  for (Vec2 target : targets) {
    std::size_t i = nearest_vertex(out, target);
    if (out.closed) {
      // Rotate so the corner sits in the middle, then splice as if open.
      const std::size_t n = out.size();
      const std::size_t shift = (i + n - n / 2) % n;
      std::rotate(out.points.begin(), out.points.begin() + static_cast<std::ptrdiff_t>(shift), out.points.end());
      i = n / 2;
    }
    round_at(out.points, i, radius, h);
  }
  return out;
}

FlowRun run_flow(const PolyCurve &initial, const FlowParams &params, const FlowObserver &observer) {
  check_params(params);
  FlowRun run;
  PolyCurve state = initial;
  double t = params.start_time;
  run.times.push_back(t);
  run.diagnostics.push_back(diagnose(state));
  run.snapshot_times.push_back(t);
  run.states.push_back(state);

  const double tol = 1e-9 * params.dt;
  std::size_t steps = 0;
  bool last_stored = true;
  while (t < params.end_time - tol) {
    const double dt = std::min(params.dt, params.end_time - t);
    try {
      state = redistribute(step_parametric(state, dt, params.h, params.scheme, params.ends), params);
    } catch (const StabilityError &e) {
      run.stop_reason = e.what();
      run.failure_time = t;
      if (!last_stored) {
        run.snapshot_times.push_back(t);
        run.states.push_back(state);
      }
      return run;
    }
    t = params.end_time - t - dt <= tol ? params.end_time : t + dt;
    ++steps;
    run.times.push_back(t);
    run.diagnostics.push_back(diagnose(state));
    if (observer) observer(t, state);
    last_stored = false;
    if (params.snapshot_every > 0 && steps % params.snapshot_every == 0) {
      run.snapshot_times.push_back(t);
      run.states.push_back(state);
      last_stored = true;
    }
  }
  if (!last_stored) {
    run.snapshot_times.push_back(t);
    run.states.push_back(state);
  }
  run.completed = true;
  return run;
}

GraphRun run_flow(const GraphCurve &initial, const FlowParams &params, const GraphObserver &observer) {
  if (!(params.dt > 0) || !(params.end_time >= params.start_time))
    throw LabError("graph flow: invalid time stepping");
  GraphRun run;
  GraphCurve state = initial;
  state.time = params.start_time;
  run.times.push_back(state.time);
  run.states.push_back(state);
  const double tol = 1e-9 * params.dt;
  std::size_t steps = 0;
  bool last_stored = true;
  while (state.time < params.end_time - tol) {
    const double dt = std::min(params.dt, params.end_time - state.time);
    try {
      state = step_graph(state, dt);
    } catch (const SolveError &e) {
      run.stop_reason = e.what();
      if (!last_stored) run.states.push_back(state);
      return run;
    }
    if (params.end_time - state.time <= tol) state.time = params.end_time;
    ++steps;
    run.times.push_back(state.time);
    if (observer) observer(state.time, state);
    last_stored = false;
    if (params.snapshot_every > 0 && steps % params.snapshot_every == 0) {
      run.states.push_back(state);
      last_stored = true;
    }
  }
  if (!last_stored) run.states.push_back(state);
  run.completed = true;
  return run;
}

} // namespace ancient

#include "ancient/glue.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ancient {

namespace {

// ln(sin z / z)
double log_sinc(double z) {
  if (std::abs(z) < 1e-3) {
    const double z2 = z * z;
    return -z2 / 6.0 - z2 * z2 / 180.0 - z2 * z2 * z2 / 2835.0;
  }
  return std::log(std::sin(z) / z);
}

// log_sinc(a) - log_sinc(b) without cancellation for small arguments.
double log_sinc_difference(double a, double b) {
  if (std::max(std::abs(a), std::abs(b)) < 1e-3) {
    const double a2 = a * a, b2 = b * b;
    const double d2 = (a - b) * (a + b);
    const double d4 = d2 * (a2 + b2);
    const double d6 = d2 * (a2 * a2 + a2 * b2 + b2 * b2);
    return -d2 / 6.0 - d4 / 180.0 - d6 / 2835.0;
  }
  return log_sinc(a) - log_sinc(b);
}

// Smallest offset tried when bracketing a corner.
constexpr double kTinyOffset = 1e-300;

// Heights a soliton runs between, in traversal order.
struct Span {
  double from = 0.0;
  double to = 0.0;
};

std::vector<Span> spans(const ChainSpec &spec) {
  const auto &a = spec.heights;
  std::vector<Span> out;
  for (std::size_t k = 1; k < a.size(); ++k) out.push_back({a[k - 1], a[k]});
  if (spec.compact && !closes_explicitly(spec)) out.push_back({a.back(), a.front()});
  return out;
}

Branch side_of(const ReaperSpec &r, double asymptote) {
  return asymptote == r.low ? Branch::Lower : Branch::Upper;
}

const Junction &find_junction(const std::vector<Junction> &js, std::size_t k) {
  for (const auto &j : js)
    if (j.index == k) return j;
  std::ostringstream os;
  os << "no junction with index " << k;
  throw LabError(os.str());
}

Corner corner_between(const ReaperSpec &left, const ReaperSpec &right, const Junction &j,
                      double t) {
  const double half_gap = 0.5 * std::min(left.width(), right.width());
  auto gap = [&](double log_eta) {
    const double eta = std::exp(log_eta);
    return x_at_offset(left, Branch::Lower, eta, t) - x_at_offset(right, Branch::Lower, eta, t);
  };
  double lo = std::log(kTinyOffset);
  double hi = std::log(half_gap);
  const double f_lo = gap(lo);
  const double f_hi = gap(hi);
  if (!(f_lo * f_hi < 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "solitons sharing a_" << j.index << " do not cross within half the gap at t = " << t;
    throw NoBracket(os.str());
  }
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f = gap(mid);
    if ((f < 0.0) == (f_lo < 0.0)) lo = mid;
    else hi = mid;
  }
  Corner c;
  c.index = j.index;
  c.left = j.left;
  c.right = j.right;
  c.height = j.height;
  c.side = left.low == j.height ? 1 : -1;
  c.eta = std::exp(0.5 * (lo + hi));
  c.v_left = left.velocity;
  c.v_right = right.velocity;
  c.location = {x_at_offset(left, Branch::Lower, c.eta, t), j.height + c.side * c.eta};
  c.angle = corner_angle(c);

  const double vl = left.velocity, vr = right.velocity, sum = vl + vr;
  const int sigma = left.parity;
  c.c_k = (vl * left.shift + vr * right.shift - sigma * std::log(vl / vr)) / sum;
  c.predicted_x = sigma * (vl - vr) * t + c.c_k;
  c.x_residual = -sigma * log_sinc_difference(vl * c.eta, vr * c.eta) / sum;
  return c;
}

// Arm of soliton `r` followed from its tip out to the asymptote: pass the
// y-axis by two units and the tip by a few decay lengths, then stop once
// within kAsymptoteTolerance of the asymptote.
double open_end_offset(const ReaperSpec &r, double t) {
  const double target = r.parity * std::max(2.0, r.parity * tip(r, t).x + 4.0 / r.velocity);
  return std::min(kAsymptoteTolerance, offset_of_x(r, target, t));
}

struct Assembly {
  std::vector<Arc> arcs;
  std::vector<Corner> corners;
  std::vector<std::vector<Vec2>> blends;  // blends[i] follows arcs[i]
  bool closed = false;
};

// The glued strip between a tip-right soliton and a tip-left soliton on
// either side of the shared asymptote `a`.
struct GlueZone {
  const ReaperSpec *right_tip = nullptr;  // parity -1, kept for x >= 1
  const ReaperSpec *left_tip = nullptr;   // parity +1, kept for x <= -1
  double a = 0.0;
  int right_side = 1;  // which side of `a` the tip-right soliton lies on

  double offset(double x, double t) const {
    const double w = cutoff_eta(x);
    const double d_r = right_side * offset_of_x(*right_tip, x, t);
    const double d_l = -right_side * offset_of_x(*left_tip, x, t);
    return w * d_r + (1.0 - w) * d_l;
  }
};

GlueZone glue_zone(const ReaperSpec &before, const ReaperSpec &after, double a) {
  GlueZone z;
  if (before.parity == after.parity)
    throw LabError("glued solitons must have opposite parity");
  z.right_tip = before.parity < 0 ? &before : &after;
  z.left_tip = before.parity < 0 ? &after : &before;
  z.a = a;
  z.right_side = z.right_tip->low == a ? 1 : -1;
  return z;
}

double glue_end_offset(const ReaperSpec &r, double t) {
  try {
    return offset_of_x(r, r.parity < 0 ? 1.0 : -1.0, t);
  } catch (const DomainError &) {
    throw ThresholdError("soliton tip lies inside the gluing strip |x| <= 1");
  }
}

std::vector<Vec2> sample_arc(const ReaperSpec &r, double s0, double s1, double t, double h) {
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(std::abs(s1 - s0) / h)));
  std::vector<Vec2> pts;
  pts.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double s = s0 + (s1 - s0) * static_cast<double>(i) / static_cast<double>(n);
    pts.push_back(point_at_arclength(r, s, t).position);
  }
  return pts;
}

// Solitons first..last (positions in `sol`), joined at junctions js[first..last-1],
// plus the wrap junction when closed.
Assembly assemble(const std::vector<ReaperSpec> &sol, const std::vector<Span> &sp,
                  const std::vector<Junction> &js, std::size_t first, std::size_t last,
                  bool closed, double t, double h) {
  Assembly out;
  out.closed = closed;
  const std::size_t count = last - first + 1;
  // Offsets where each soliton starts and ends.
  std::vector<double> eta_begin(count), eta_end(count);
  std::vector<std::vector<Vec2>> blends(count);
  std::vector<Corner> corners;

  auto junction_after = [&](std::size_t i) -> const Junction * {
    const std::size_t pos = first + i;
    if (i + 1 < count) return &js[pos];  // js[k-1] joins solitons k-1 and k (0-based)
    if (closed) return &js.back();
    return nullptr;
  };

  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t pos = first + i;
    if (!closed && i == 0) eta_begin[i] = open_end_offset(sol[pos], t);
    if (!closed && i + 1 == count) eta_end[i] = open_end_offset(sol[pos], t);
    const Junction *j = junction_after(i);
    if (!j) continue;
    const std::size_t next_i = (i + 1) % count;
    const ReaperSpec &a = sol[j->left];
    const ReaperSpec &b = sol[j->right];
    if (j->alternating) {
      Corner c = corner_between(a, b, *j, t);
      eta_end[i] = c.eta;
      eta_begin[next_i] = c.eta;
      corners.push_back(c);
    } else {
      const GlueZone z = glue_zone(a, b, j->height);
      eta_end[i] = glue_end_offset(a, t);
      eta_begin[next_i] = glue_end_offset(b, t);
      const double x0 = a.parity < 0 ? 1.0 : -1.0;
      const double x1 = -x0;
      const auto n = static_cast<std::size_t>(std::max(2.0, std::ceil(2.0 / h)));
      for (std::size_t m = 1; m < n; ++m) {
        const double x = x0 + (x1 - x0) * static_cast<double>(m) / static_cast<double>(n);
        blends[i].push_back({x, z.a + z.offset(x, t)});
      }
    }
  }
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t pos = first + i;
    const ReaperSpec &r = sol[pos];
    const double s0 = arclength_at_offset(r, side_of(r, sp[pos].from), eta_begin[i]);
    const double s1 = arclength_at_offset(r, side_of(r, sp[pos].to), eta_end[i]);
    Arc arc;
    arc.soliton = pos;
    arc.s_begin = s0;
    arc.s_end = s1;
    arc.points = sample_arc(r, s0, s1, t, h);
    out.arcs.push_back(std::move(arc));
  }
  out.corners = std::move(corners);
  out.blends = std::move(blends);
  return out;
}

PolyCurve concatenate(const Assembly &as) {
  PolyCurve c;
  c.closed = as.closed;
  for (std::size_t i = 0; i < as.arcs.size(); ++i) {
    const auto &pts = as.arcs[i].points;
    const bool skip_first = !c.points.empty() && i > 0 && as.blends[i - 1].empty();
    c.points.insert(c.points.end(), pts.begin() + (skip_first ? 1 : 0), pts.end());
    if (i < as.blends.size())
      c.points.insert(c.points.end(), as.blends[i].begin(), as.blends[i].end());
  }
  if (c.closed && c.points.size() > 1) {
    // The last arc ends where the first begins (or a blend closes the gap).
    if (as.blends.back().empty()) c.points.pop_back();
  }
  return c;
}

double signed_turning(const PolyCurve &c) {
  double sum = 0.0;
  for (double a : turning_angles(c)) sum += a;
  return sum;
}

BrokenCurve broken_from(const std::vector<ReaperSpec> &sol, const std::vector<Span> &sp,
                        const std::vector<Junction> &js, std::size_t first, std::size_t last,
                        bool closed, double t, double h) {
  Assembly as = assemble(sol, sp, js, first, last, closed, t, h);
  BrokenCurve b;
  b.time = t;
  b.closed = closed;
  b.solitons = sol;
  b.arcs = std::move(as.arcs);
  b.corners = std::move(as.corners);
  if (signed_turning(b.polyline()) < 0.0) {
    std::reverse(b.arcs.begin(), b.arcs.end());
    for (auto &arc : b.arcs) {
      std::reverse(arc.points.begin(), arc.points.end());
      std::swap(arc.s_begin, arc.s_end);
    }
    std::reverse(b.corners.begin(), b.corners.end());
  }
  return b;
}

// Solitons that meet a neighbour by gluing rather than at a corner; a lone
// soliton counts too.
std::vector<std::size_t> glued_solitons(const std::vector<ReaperSpec> &sol,
                                        const std::vector<Junction> &js) {
  std::vector<std::size_t> out;
  for (const auto &j : js) {
    if (j.alternating) continue;
    out.push_back(j.left);
    out.push_back(j.right);
  }
  if (sol.size() == 1) out.push_back(0);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool tips_clear_strip(const std::vector<ReaperSpec> &sol, const std::vector<std::size_t> &which,
                      double t) {
  for (std::size_t i : which) {
    const double x = tip(sol[i], t).x;
    if (sol[i].parity < 0 ? !(x > 1.0) : !(x < -1.0)) return false;
  }
  return true;
}

bool corners_exist(const std::vector<ReaperSpec> &sol, const std::vector<Junction> &js, double t) {
  for (const auto &j : js) {
    if (!j.alternating) continue;
    try {
      corner_between(sol[j.left], sol[j.right], j, t);
    } catch (const NoBracket &) {
      return false;
    }
  }
  return true;
}

void require_supported(const ChainSpec &spec) {
  if (spec.compact && classify(spec).kind != Scenario::Convex)
    throw UnsupportedScenario("compact chains must alternate at every height");
}

} // namespace

double corner_angle(const Corner &c) { return (c.v_left + c.v_right) * c.eta; }

Corner corner(const ChainSpec &spec, std::size_t k, double t) {
  const auto sol = solitons(spec);
  const auto js = junctions(spec);
  const Junction &j = find_junction(js, k);
  if (!j.alternating) {
    std::ostringstream os;
    os << "heights do not alternate at a_" << k;
    throw UnsupportedScenario(os.str());
  }
  return corner_between(sol[j.left], sol[j.right], j, t);
}

double find_t0(const ChainSpec &spec) {
  require_supported(spec);
  const auto sol = solitons(spec);
  const auto js = junctions(spec);
  const auto glued = glued_solitons(sol, js);
  auto ok = [&](double t) {
    if (!tips_clear_strip(sol, glued, t)) return false;
    return corners_exist(sol, js, t);
  };
  double good = -1.0;
  while (!ok(good)) {
    good *= 2.0;
    if (good < -1e12) throw LabError("no admissible time found");
  }
  double bad = good + 1.0;
  while (ok(bad)) {
    bad = bad + 2.0 * (bad - good);
    if (bad > 1e12) return bad;
  }
  for (int it = 0; it < 200 && bad - good > 1e-12 * std::max(1.0, std::abs(good)); ++it) {
    const double mid = 0.5 * (good + bad);
    if (ok(mid)) good = mid;
    else bad = mid;
  }
  return good;
}

double cutoff_eta(double x) {
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double s = 0.5 * (x + 1.0);
  return s * s * s * (s * (6.0 * s - 15.0) + 10.0);
}

double cutoff_eta_derivative(double x) {
  if (x <= -1.0 || x >= 1.0) return 0.0;
  const double s = 0.5 * (x + 1.0);
  return 15.0 * s * s * (1.0 - s) * (1.0 - s);
}

Vec2 arm_velocity(const ReaperSpec &r) { return {r.parity * r.velocity, 0.0}; }

PolyCurve BrokenCurve::polyline() const {
  PolyCurve c;
  c.closed = closed;
  for (const auto &arc : arcs) {
    const bool skip = !c.points.empty();
    c.points.insert(c.points.end(), arc.points.begin() + (skip ? 1 : 0), arc.points.end());
  }
  if (closed && c.points.size() > 1) c.points.pop_back();
  return c;
}

BrokenCurve broken_curve(const ChainSpec &spec, double t, double h) {
  if (!(h > 0.0)) throw LabError("sampling step must be positive");
  const auto cls = classify(spec);
  if (cls.kind != Scenario::Convex || (!spec.compact && spec.n() < 2))
    throw UnsupportedScenario("broken curves need alternating heights");
  const auto sol = solitons(spec);
  const auto js = junctions(spec);
  return broken_from(sol, spans(spec), js, 0, sol.size() - 1, spec.compact, t, h);
}

PolyCurve approximate_curve(const ChainSpec &spec, double t, double h) {
  if (!(h > 0.0)) throw LabError("sampling step must be positive");
  require_supported(spec);
  const auto sol = solitons(spec);
  const auto js = junctions(spec);
  Assembly as = assemble(sol, spans(spec), js, 0, sol.size() - 1, spec.compact, t, h);
  PolyCurve c = concatenate(as);
  if (classify(spec).kind == Scenario::Convex && signed_turning(c) < 0.0) c = reversed(c);
  return c;
}

namespace {

// x on soliton r at the point anchor + offset, where anchor is r.low or r.high.
double x_at(const ReaperSpec &r, double anchor, double offset, double t) {
  return anchor == r.low ? x_at_offset(r, Branch::Lower, offset, t) : x_at_offset(r, Branch::Upper, -offset, t);
}

std::vector<double> ascending_heights(const ChainSpec &spec) {
  std::vector<double> a = spec.heights;
  if (a.front() > a.back()) std::reverse(a.begin(), a.end());
  return a;
}

} // namespace

GraphCurve glued_graph(const ChainSpec &spec, double t, const std::vector<double> &grid) {
  // Anchor every point at the nearer height of its strip.
  const std::vector<double> a = ascending_heights(spec);
  GraphCurve g;
  g.grid = grid;
  for (double y : grid) {
    auto it = std::upper_bound(a.begin(), a.end(), y);
    if (it == a.begin() || it == a.end()) throw DomainError("grid point outside the open strip");
    const double lo = *(it - 1), hi = *it;
    const double anchor = y - lo <= hi - y ? lo : hi;
    g.anchors.push_back(anchor);
    g.offsets.push_back(y - anchor);
  }
  GraphCurve out = glued_graph(spec, t, g);
  out.anchors.clear();
  out.offsets.clear();
  return out;
}

GraphCurve glued_graph(const ChainSpec &spec, double t, const GraphCurve &grid) {
  const auto cls = classify(spec);
  if (cls.kind != Scenario::Embedded) throw UnsupportedScenario("glued graphs need monotone heights");
  const double t0 = find_t0(spec);
  if (!(t < t0)) {
    std::ostringstream os;
    os.precision(17);
    os << "t = " << t << " is not below the gluing threshold " << t0;
    throw ThresholdError(os.str());
  }
  if (grid.anchors.size() != grid.size() || grid.offsets.size() != grid.size())
    throw LabError("glued_graph: grid without anchors");
  const auto sol = solitons(spec);
  const auto js = junctions(spec);
  GraphCurve g;
  g.grid = grid.grid;
  g.anchors = grid.anchors;
  g.offsets = grid.offsets;
  g.time = t;
  g.values.reserve(g.size());
  std::vector<GlueZone> zones;
  for (const auto &j : js) zones.push_back(glue_zone(sol[j.left], sol[j.right], j.height));
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double anchor = g.anchors[i], d = g.offsets[i];
    if (!(d != 0.0)) throw DomainError("grid point on an asymptote");
    std::size_t k = 0;
    while (k < sol.size() && !(d > 0 ? sol[k].low == anchor : sol[k].high == anchor)) ++k;
    if (k == sol.size()) throw DomainError("grid anchor is not a height of the chain");
    const ReaperSpec &r = sol[k];
    if (!(std::abs(d) < r.width())) throw DomainError("grid point outside the open strip");
    double u = x_at(r, anchor, d, t);
    for (const auto &z : zones) {
      if (z.a != anchor) continue;
      const double top = z.offset(-1.0, t);  // value at x = -1 (left-tip side)
      const double bottom = z.offset(1.0, t);
      if (!(d > std::min(top, bottom) && d < std::max(top, bottom))) continue;
      // Offset decreases monotonically from x = -1 to x = +1 towards the
      // tip-right side; bisect for the abscissa.
      double lo = -1.0, hi = 1.0;
      const double f_lo = z.offset(lo, t) - d;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f = z.offset(mid, t) - d;
        if ((f < 0.0) == (f_lo < 0.0)) lo = mid;
        else hi = mid;
      }
      u = 0.5 * (lo + hi);
    }
    g.values.push_back(u);
  }
  const std::size_t last = g.size() - 1;
  auto owner = [&sol](double anchor, double d) -> const ReaperSpec & {
    for (const auto &r : sol)
      if (d > 0 ? r.low == anchor : r.high == anchor) return r;
    throw DomainError("grid anchor is not a height of the chain");
  };
  const ReaperSpec first = owner(g.anchors.front(), g.offsets.front());
  const ReaperSpec final = owner(g.anchors[last], g.offsets[last]);
  const double a0 = g.anchors.front(), d0 = g.offsets.front(), a1 = g.anchors[last], d1 = g.offsets[last];
  g.boundary = [first, final, a0, d0, a1, d1](double time) {
    return std::make_pair(x_at(first, a0, d0, time), x_at(final, a1, d1, time));
  };
  return g;
}

GraphCurve embedded_grid(const ChainSpec &spec, double t, double h) {
  if (classify(spec).kind != Scenario::Embedded) throw UnsupportedScenario("graded grids need monotone heights");
  const auto sol = solitons(spec);
  double finest = 0.5 * h;
  for (const auto &j : junctions(spec)) {
    const double e = std::min(glue_end_offset(sol[j.left], t), glue_end_offset(sol[j.right], t));
    finest = std::min(finest, 1e-2 * e);
  }
  if (!(finest > 1e-300)) throw ThresholdError("glue zone below the range of doubles");
  // The ends sit far out on the arms, where the curve is the soliton to
  // within exponentially small terms.
  return graded_grid(ascending_heights(spec), h, finest, 1e-6 * h);
}

PolyCurve graph_with_tails(const ChainSpec &spec, const GraphCurve &g, double h) {
  if (classify(spec).kind != Scenario::Embedded) throw UnsupportedScenario("tails need an embedded chain");
  if (g.size() < 2) throw LabError("graph with fewer than two points");
  const auto sol = solitons(spec);
  const bool rising = spec.heights.back() > spec.heights.front();
  const ReaperSpec &bottom = rising ? sol.front() : sol.back();
  const ReaperSpec &top = rising ? sol.back() : sol.front();
  const double lo = std::min(spec.heights.front(), spec.heights.back());
  const double hi = std::max(spec.heights.front(), spec.heights.back());
  const double t = g.time;

  const double eta0 = g.anchors.empty() ? g.grid.front() - lo : g.offsets.front();
  const double eta1 = g.anchors.empty() ? hi - g.grid.back() : -g.offsets.back();

  PolyCurve c;
  // Arms only where the grid stops short of the open ends.
  const double end0 = open_end_offset(bottom, t);
  if (end0 < eta0) {
    auto head = sample_arc(bottom, arclength_at_offset(bottom, Branch::Lower, end0),
                           arclength_at_offset(bottom, Branch::Lower, eta0), t, h);
    head.pop_back();
    c.points = std::move(head);
  }
  // Points that coincide in doubles (same rounded height, x within round-off) are dropped.
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec2 p{g.values[i], g.grid[i]};
    if (!c.points.empty() && c.points.back().y == p.y &&
        std::abs(c.points.back().x - p.x) <= 1e-12 * std::max(1.0, std::abs(p.x)))
      continue;
    c.points.push_back(p);
  }
  const double end1 = open_end_offset(top, t);
  if (end1 < eta1) {
    auto tail = sample_arc(top, arclength_at_offset(top, Branch::Upper, eta1),
                           arclength_at_offset(top, Branch::Upper, end1), t, h);
    c.points.insert(c.points.end(), tail.begin() + 1, tail.end());
  }
  return c;
}

BarrierAssembly barrier_chain(const ChainSpec &spec, double t, double h) {
  require_supported(spec);
  BarrierAssembly out;
  out.runs = decompose_runs(spec);
  const auto sol = solitons(spec);
  const auto js = junctions(spec);
  const auto sp = spans(spec);
  const auto &bp = out.runs.breakpoints;
  if (spec.compact) {
    out.barriers.push_back(broken_from(sol, sp, js, 0, sol.size() - 1, true, t, h));
  } else {
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
      // Run a_{l_i}..a_{l_{i+1}} covers solitons l_i+1..l_{i+1}.
      out.barriers.push_back(broken_from(sol, sp, js, bp[i], bp[i + 1] - 1, false, t, h));
    }
  }
  out.glued = approximate_curve(spec, t, h);
  return out;
}

} // namespace ancient

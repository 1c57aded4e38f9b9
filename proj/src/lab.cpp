#include "ancient/lab.hpp"

#include "ancient/glue.hpp"
#include "ancient/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;

namespace ancient {

namespace {

std::string tag(double j) {
  std::string s = format_number(j);
  std::replace(s.begin(), s.end(), '.', 'p');
  std::replace(s.begin(), s.end(), '-', 'm');
  return "j" + s;
}

void write_file(const fs::path &p, const std::string &content, Artifacts &out) {
  fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw LabError("cannot write " + p.string());
  f << content;
  out.files.push_back(p);
}

std::string table_string(const std::vector<std::string> &cols, const std::vector<std::vector<double>> &rows) {
  std::ostringstream os;
  write_table(os, cols, rows);
  return os.str();
}

std::string curves_string(const std::vector<CurveFrame> &frames) {
  std::ostringstream os;
  write_curves(os, frames);
  return os.str();
}

Scenario kind_of(const ScenarioConfig &s) { return classify(s.chain).kind; }

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

// Reference curve C-bar(t) for diagnostics.
PolyCurve reference_curve(const ScenarioConfig &s, double t) {
  if (kind_of(s) == Scenario::Convex) return broken_curve(s.chain, t, s.flow.h).polyline();
  return approximate_curve(s.chain, t, s.flow.h);
}

std::vector<double> diagnostic_row(const ScenarioConfig &s, double t, const PolyCurve &c) {
  const Diagnostics d = diagnose(c);
  double area = nan(), predicted = nan(), strip = nan();
  try {
    const PolyCurve ref = reference_curve(s, t);
    strip = strip_distance(c, ref);
    if (kind_of(s) == Scenario::Convex) {
      area = area_between(c, ref).value;
      predicted = predicted_area_rate_convex(broken_curve(s.chain, t, s.flow.h).corners);
    }
  } catch (const LabError &) {
    // Past the construction threshold there is no reference curve.
  }
  const auto cr = crossings_and_tangents(c);
  return {t,         d.length, d.total_curvature, d.max_curvature, area, predicted, strip,
          static_cast<double>(cr.crossings.size()), static_cast<double>(cr.vertical_tangents.size())};
}

Viewport viewport_for(const ScenarioConfig &s, double t) {
  const auto &a = s.chain.heights;
  const double lo = *std::min_element(a.begin(), a.end());
  const double hi = *std::max_element(a.begin(), a.end());
  Viewport v;
  v.ymin = lo - 0.15 * (hi - lo);
  v.ymax = hi + 0.15 * (hi - lo);
  v.xmin = -3.0;
  v.xmax = 3.0;
  for (const auto &r : solitons(s.chain)) {
    const double x = tip(r, t).x;
    v.xmin = std::min(v.xmin, x - 2.0);
    v.xmax = std::max(v.xmax, x + 2.0);
  }
  return v;
}

std::vector<PolyCurve> soliton_layer(const ScenarioConfig &s, double t, const Viewport &view) {
  std::vector<PolyCurve> out;
  const double reach = view.xmax - view.xmin;
  for (const auto &r : solitons(s.chain)) {
    // Out to where the arm leaves the viewport.
    const double s_max = reach + 2.0 * r.width();
    const double step = std::max(1e-3, std::min(r.width(), reach) / 400.0);
    PolyCurve c;
    for (double q = -s_max; q <= s_max; q += step) c.points.push_back(point_at_arclength(r, q, t).position);
    out.push_back(std::move(c));
  }
  return out;
}

std::string render_frame(const ScenarioConfig &s, double t, const std::vector<PolyCurve> &flowed,
                         const std::string &title) {
  const Viewport view = viewport_for(s, t);
  std::vector<SvgLayer> layers;
  layers.push_back({"solitons", "#9a9a9a", 1.0, true, soliton_layer(s, t, view)});
  try {
    if (kind_of(s) == Scenario::General) {
      const auto bc = barrier_chain(s.chain, t, s.flow.h);
      SvgLayer barriers{"barriers", "#d95f02", 1.5, false, {}};
      for (const auto &b : bc.barriers) barriers.curves.push_back(b.polyline());
      layers.push_back(barriers);
    } else {
      layers.push_back({kind_of(s) == Scenario::Convex ? "broken" : "glued", "#d95f02", 1.5, false,
                        {reference_curve(s, t)}});
    }
  } catch (const LabError &) {
  }
  if (!flowed.empty()) layers.push_back({"flowed", "#1b9e77", 1.5, false, flowed});
  return render_svg(layers, view, title);
}

} // namespace

ScenarioConfig apply_overrides(ScenarioConfig s, const LabOptions &opts) {
  if (opts.h) {
    s.flow.h = *opts.h;
    if (!opts.dt && s.flow.scheme == Scheme::Explicit) s.flow.dt = 0.4 * s.flow.h * s.flow.h;
  }
  if (opts.dt) s.flow.dt = *opts.dt;
  validate(s);
  return s;
}

fs::path output_dir(const ScenarioConfig &s, const LabOptions &opts, const std::string &command) {
  fs::path root = opts.out_root;
  if (root.empty()) root = s.output;
  if (root.empty()) {
    if (const char *env = std::getenv(kOutputEnv); env && *env) root = env;
  }
  if (root.empty()) root = "ancientlab-out";
  return root / s.name / command;
}

OpenEnds open_end_motion(const PolyCurve &c, const ChainSpec &spec, double) {
  OpenEnds ends;
  if (c.closed || c.size() < 2) return ends;
  const auto sol = solitons(spec);
  const ReaperSpec &front = sol.front();
  const ReaperSpec &back = sol.back();
  const double a0 = spec.heights.front(), an = spec.heights.back();
  auto pick = [&](Vec2 p) {
    auto score = [&](const ReaperSpec &r, double a) {
      const int side = p.x < 0 ? -1 : 1;
      return (r.parity == side ? 0.0 : 10.0) + std::abs(p.y - a);
    };
    return score(front, a0) <= score(back, an) ? arm_velocity(front) : arm_velocity(back);
  };
  ends.head_velocity = pick(c.points.front());
  ends.tail_velocity = pick(c.points.back());
  return ends;
}

PolyCurve initial_curve(const ScenarioConfig &s, double j) {
  const double t = -j;
  const double h = s.flow.h;
  if (kind_of(s) == Scenario::Convex) {
    const BrokenCurve bc = broken_curve(s.chain, t, h);
    const PolyCurve poly = bc.polyline();
    std::vector<std::size_t> idx;
    for (const auto &c : bc.corners) idx.push_back(nearest_vertex(poly, c.location));
    return round_corners(poly, idx, mollify_radius(s.flow), h);
  }
  return approximate_curve(s.chain, t, h);
}

GraphCurve initial_graph(const ScenarioConfig &s, double j) {
  return glued_graph(s.chain, -j, embedded_grid(s.chain, -j, s.flow.h));
}

const std::vector<std::string> &diagnostic_columns() {
  static const std::vector<std::string> cols = {"t",        "length",         "total_curvature",
                                                "max_curvature", "area",      "predicted_rate",
                                                "strip_distance", "crossings", "vertical_tangents"};
  return cols;
}

RunResult run_member(const ScenarioConfig &s, double j) {
  RunResult res;
  res.j = j;
  FlowParams p = s.flow;
  p.start_time = -j;
  p.end_time = s.end_time;
  p.snapshot_every = 0;
  const std::size_t every = std::max<std::size_t>(1, s.frame_every);
  std::size_t step = 0;
  bool last_recorded = false;
  PolyCurve last;
  double last_t = p.start_time;

  auto record = [&](double t, const PolyCurve &c) {
    res.frames.push_back({t, c});
    res.rows.push_back(diagnostic_row(s, t, c));
  };

  if (kind_of(s) == Scenario::Embedded) {
    const GraphCurve g0 = initial_graph(s, j);
    record(p.start_time, graph_with_tails(s.chain, g0, s.flow.h));
    const GraphRun run = run_flow(g0, p, [&](double t, const GraphCurve &g) {
      ++step;
      last_recorded = step % every == 0;
      if (last_recorded) record(t, graph_with_tails(s.chain, g, s.flow.h));
      last_t = t;
    });
    if (!last_recorded && !run.states.empty()) record(last_t, graph_with_tails(s.chain, run.states.back(), s.flow.h));
    res.completed = run.completed;
    res.stop_reason = run.stop_reason;
  } else {
    const PolyCurve c0 = initial_curve(s, j);
    p.ends = open_end_motion(c0, s.chain, p.start_time);
    record(p.start_time, c0);
    const FlowRun run = run_flow(c0, p, [&](double t, const PolyCurve &c) {
      ++step;
      last_recorded = step % every == 0;
      if (last_recorded) record(t, c);
      last_t = t;
    });
    if (!last_recorded && step > 0) record(last_t, run.states.back());
    res.completed = run.completed;
    res.stop_reason = run.stop_reason;
  }
  res.steps = step;
  return res;
}

std::vector<RunResult> run_ladder(const ScenarioConfig &s, unsigned workers) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<RunResult> out(s.start_times.size());
  for (std::size_t begin = 0; begin < s.start_times.size(); begin += workers) {
    std::vector<std::future<RunResult>> batch;
    const std::size_t end = std::min(s.start_times.size(), begin + workers);
    for (std::size_t i = begin; i < end; ++i) {
      batch.push_back(std::async(std::launch::async, [&s, j = s.start_times[i]] {
        try {
          return run_member(s, j);
        } catch (const LabError &e) {
          RunResult r;
          r.j = j;
          r.stop_reason = e.what();
          return r;
        }
      }));
    }
    for (std::size_t i = begin; i < end; ++i) out[i] = batch[i - begin].get();
  }
  return out;
}

Artifacts cmd_build(const ScenarioConfig &s, const LabOptions &opts) {
  Artifacts out;
  const fs::path dir = output_dir(s, opts, "build");
  const Scenario kind = kind_of(s);
  for (double j : s.start_times) {
    const double t = -j;
    const std::string id = tag(j);
    PolyCurve curve;
    if (kind == Scenario::Convex) {
      const BrokenCurve bc = broken_curve(s.chain, t, s.flow.h);
      curve = bc.polyline();
      std::vector<std::vector<double>> rows;
      for (const auto &c : bc.corners)
        rows.push_back({static_cast<double>(c.index), c.height, static_cast<double>(c.side), c.eta,
                        c.location.x, c.angle, c.c_k, c.predicted_x});
      write_file(dir / ("corners_" + id + ".csv"),
                 table_string({"k", "a_k", "side", "eta", "x", "angle", "c_k", "predicted_x"}, rows), out);
      out.log.push_back(id + ": " + std::to_string(bc.corners.size()) + " corners");
    } else if (kind == Scenario::Embedded) {
      curve = graph_with_tails(s.chain, initial_graph(s, j), s.flow.h);
      const auto cr = crossings_and_tangents(curve);
      std::vector<std::vector<double>> rows;
      for (const auto &p : cr.crossings) rows.push_back({0.0, p.point.x, p.point.y});
      for (const auto &p : cr.vertical_tangents) rows.push_back({1.0, p.point.x, p.point.y});
      write_file(dir / ("crossings_" + id + ".csv"), table_string({"vertical", "x", "y"}, rows), out);
      out.log.push_back(id + ": " + std::to_string(cr.crossings.size()) + " crossings, " +
                        std::to_string(cr.vertical_tangents.size()) + " vertical tangents");
    } else {
      const auto bc = barrier_chain(s.chain, t, s.flow.h);
      for (std::size_t i = 0; i < bc.barriers.size(); ++i)
        write_file(dir / ("barrier" + std::to_string(i) + "_" + id + ".csv"),
                   curves_string({{t, bc.barriers[i].polyline()}}), out);
      curve = bc.glued;
      out.log.push_back(id + ": " + std::to_string(bc.barriers.size()) + " barriers");
    }
    write_file(dir / ("curve_" + id + ".csv"), curves_string({{t, curve}}), out);
    write_file(dir / ("initial_" + id + ".svg"), render_frame(s, t, {}, s.name + " t=" + format_number(t)), out);
  }
  return out;
}

Artifacts cmd_flow(const ScenarioConfig &s, const LabOptions &opts) {
  Artifacts out;
  const fs::path dir = output_dir(s, opts, "flow");
  const auto runs = run_ladder(s, opts.workers);
  std::vector<std::vector<double>> summary;
  for (const auto &r : runs) {
    const std::string id = tag(r.j);
    write_file(dir / ("diagnostics_" + id + ".csv"), table_string(diagnostic_columns(), r.rows), out);
    write_file(dir / ("curves_" + id + ".csv"), curves_string(r.frames), out);
    if (!r.frames.empty()) {
      const auto &f = r.frames.back();
      write_file(dir / ("final_" + id + ".svg"),
                 render_frame(s, f.time, {f.curve}, s.name + " " + id + " t=" + format_number(f.time)), out);
    }
    const double end_t = r.frames.empty() ? nan() : r.frames.back().time;
    summary.push_back({r.j, r.completed ? 1.0 : 0.0, static_cast<double>(r.steps), end_t});
    out.log.push_back(id + (r.completed ? ": reached " : ": stopped at ") + format_number(end_t) +
                      (r.stop_reason.empty() ? "" : " (" + r.stop_reason + ")"));
  }
  write_file(dir / "summary.csv", table_string({"j", "completed", "steps", "end_time"}, summary), out);
  return out;
}

Artifacts cmd_render(const ScenarioConfig &s, const LabOptions &opts) {
  Artifacts out;
  const fs::path src = output_dir(s, opts, "flow");
  const fs::path dir = output_dir(s, opts, "render");
  for (double j : s.start_times) {
    const fs::path p = src / ("curves_" + tag(j) + ".csv");
    std::ifstream in(p);
    if (!in) throw MissingArtifacts("no flow artifacts at " + p.string() + "; run `flow` first");
    const auto frames = read_curves(in);
    if (frames.empty()) throw MissingArtifacts("empty flow artifact " + p.string());
    std::vector<PolyCurve> curves;
    // At most eight snapshots, evenly spread.
    const std::size_t n = frames.size();
    const std::size_t shown = std::min<std::size_t>(8, n);
    for (std::size_t i = 0; i < shown; ++i) curves.push_back(frames[shown == 1 ? 0 : i * (n - 1) / (shown - 1)].curve);
    const double t = frames.back().time;
    write_file(dir / ("render_" + tag(j) + ".svg"),
               render_frame(s, t, curves, s.name + " " + tag(j) + " t=" + format_number(t)), out);
  }
  return out;
}

bool VerifyReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check &c) { return !c.applicable || c.pass; });
}

namespace {

Check skipped(const std::string &name, const std::string &why) {
  Check c;
  c.name = name;
  c.applicable = false;
  c.detail = why;
  return c;
}

void angle_decay(const ScenarioConfig &s, VerifyReport &rep) {
  const double t_lo = -*std::max_element(s.start_times.begin(), s.start_times.end());
  const double t_hi = s.end_time;
  const auto js = junctions(s.chain);
  const auto sol = solitons(s.chain);
  bool any = false;
  for (const auto &jn : js) {
    if (!jn.alternating) continue;
    any = true;
    std::vector<std::pair<double, double>> samples;
    for (int i = 0; i <= 20; ++i) {
      const double t = t_lo + (t_hi - t_lo) * i / 20.0;
      samples.push_back({t, corner_angle(corner(s.chain, jn.index, t))});
    }
    Check c;
    c.name = "angle-decay a_" + std::to_string(jn.index);
    c.bound = sol[jn.left].velocity * sol[jn.right].velocity;
    c.tolerance = 0.05;
    try {
      const RateFit fit = fit_rate(samples, 0.0);
      c.value = fit.delta;
      c.pass = std::abs(fit.delta - c.bound) <= c.tolerance * c.bound;
    } catch (const DegenerateFit &e) {
      c.detail = e.what();
    }
    rep.checks.push_back(c);
  }
  if (!any) {
    // Embedded chains: soliton angle at the y-axis next to each height.
    for (std::size_t k = 0; k < sol.size(); ++k) {
      std::vector<std::pair<double, double>> samples;
      for (int i = 0; i <= 20; ++i) {
        const double t = t_lo + (t_hi - t_lo) * i / 20.0;
        samples.push_back({t, tangent_angle_at_offset(sol[k], offset_of_x(sol[k], 0.0, t))});
      }
      Check c;
      c.name = "axis-angle decay soliton " + std::to_string(k);
      c.bound = 0.0;
      try {
        const RateFit fit = fit_rate(samples, 0.0);
        c.value = fit.delta;
        c.pass = fit.delta > 0.0;
      } catch (const LabError &e) {
        c.detail = e.what();
      }
      rep.checks.push_back(c);
    }
  }
}

void area_rate(const ScenarioConfig &s, const std::vector<RunResult> &runs, VerifyReport &rep) {
  if (kind_of(s) != Scenario::Convex) {
    rep.checks.push_back(skipped("area-rate", "defined for convex chains"));
    return;
  }
  for (const auto &r : runs) {
    Check c;
    c.name = "area-rate " + tag(r.j);
    c.tolerance = 0.05;
    std::vector<double> t, a;
    for (const auto &row : r.rows) {
      t.push_back(row[0]);
      a.push_back(row[4]);
    }
    if (t.size() < 3) {
      c.detail = "too few rows";
      rep.checks.push_back(c);
      continue;
    }
    const auto rate = derivative(t, a);
    double err = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
      const double pred = r.rows[i][5];
      if (!(pred > 0)) continue;
      err += std::abs(rate[i] - pred) / pred;
      ++count;
    }
    c.value = count ? err / static_cast<double>(count) : nan();
    c.bound = c.tolerance;
    c.pass = count > 0 && c.value < c.tolerance;
    rep.checks.push_back(c);
  }
}

void cauchy(const ScenarioConfig &s, const std::vector<RunResult> &runs, VerifyReport &rep) {
  std::vector<std::pair<double, const PolyCurve *>> finals;
  for (const auto &r : runs)
    if (r.completed && !r.frames.empty()) finals.push_back({r.j, &r.frames.back().curve});
  std::sort(finals.begin(), finals.end(), [](auto &a, auto &b) { return a.first < b.first; });
  if (finals.size() < 3) {
    rep.checks.push_back(skipped("cauchy", "needs three completed runs"));
    return;
  }
  std::vector<double> d;
  for (std::size_t i = 0; i + 1 < finals.size(); ++i)
    d.push_back(strip_distance(*finals[i + 1].second, *finals[i].second));
  for (std::size_t i = 0; i + 1 < d.size(); ++i) {
    Check c;
    c.name = "cauchy " + tag(finals[i + 1].first) + " vs " + tag(finals[i].first);
    c.value = d[i + 1];
    c.bound = d[i];
    c.pass = d[i + 1] < d[i];
    rep.checks.push_back(c);
  }
  (void)s;
}

void strip(const ScenarioConfig &s, const std::vector<RunResult> &runs, VerifyReport &rep) {
  if (kind_of(s) != Scenario::Convex) {
    rep.checks.push_back(skipped("strip", "defined for convex chains"));
    return;
  }
  for (const auto &r : runs) {
    Check c;
    c.name = "strip " + tag(r.j);
    c.tolerance = 2.0 * s.flow.h;
    c.pass = !r.rows.empty();
    double worst = -INFINITY;
    for (const auto &row : r.rows) {
      const double bound = std::sqrt(2.0 * std::max(row[4], 0.0) / kPi) + c.tolerance;
      if (row[6] - bound > worst) {
        worst = row[6] - bound;
        c.value = row[6];
        c.bound = bound;
      }
      if (!(row[6] <= bound)) c.pass = false;
    }
    rep.checks.push_back(c);
  }
}

void crossings(const ScenarioConfig &, const std::vector<RunResult> &runs, VerifyReport &rep) {
  for (const auto &r : runs) {
    Check c;
    c.name = "crossings " + tag(r.j);
    c.pass = !r.rows.empty();
    if (c.pass) {
      c.bound = r.rows.front()[7];
      c.tolerance = r.rows.front()[8];
    }
    for (const auto &row : r.rows)
      if (row[7] != c.bound || row[8] != c.tolerance) {
        c.pass = false;
        c.value = row[7];
      }
    if (c.pass) c.value = c.bound;
    c.detail = "bound: initial crossings, tolerance: initial vertical tangents";
    rep.checks.push_back(c);
  }
}

} // namespace

VerifyReport cmd_verify(const ScenarioConfig &s, const std::string &suite, const LabOptions &opts) {
  const auto &names = suite_names();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end())
    throw LabError("unknown suite '" + suite + "'");
  auto wanted = [&](const std::string &n) {
    return (suite == "all" || suite == n) && s.verify.count(n) && s.verify.at(n);
  };
  VerifyReport rep;
  std::vector<RunResult> runs;
  const bool need_runs = wanted("area-rate") || wanted("cauchy") || wanted("strip") || wanted("crossings");
  if (need_runs) runs = run_ladder(s, opts.workers);
  for (const auto &r : runs)
    if (!r.completed) {
      Check c;
      c.name = "run " + tag(r.j);
      c.detail = r.stop_reason;
      rep.checks.push_back(c);
    }
  for (const auto &n : names) {
    if (!wanted(n)) {
      if (suite == "all" || suite == n) rep.checks.push_back(skipped(n, "disabled in scenario"));
      continue;
    }
    if (n == "angle-decay") angle_decay(s, rep);
    else if (n == "area-rate") area_rate(s, runs, rep);
    else if (n == "cauchy") cauchy(s, runs, rep);
    else if (n == "strip") strip(s, runs, rep);
    else if (n == "crossings") crossings(s, runs, rep);
  }
  return rep;
}

} // namespace ancient

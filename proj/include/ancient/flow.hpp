#pragma once

#include "ancient/geometry.hpp"
#include "ancient/graph.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace ancient {

/// Raised when the discretization degenerates; carries the time of failure.
class StabilityError : public LabError {
public:
  StabilityError(const std::string &what, double time) : LabError(what), time_(time) {}
  double time() const { return time_; }

private:
  double time_;
};

class SolveError : public LabError {
public:
  using LabError::LabError;
};

enum class Scheme {
  Explicit,      ///< forward Euler, requires dt <= 0.4 h^2
  SemiImplicit,  ///< backward Euler in the positions, metric frozen per step
};

enum class Redistribution {
  EveryStep,      ///< resample to uniform arclength after each step
  WhenDistorted,  ///< resample once edge lengths leave [h/2, 2h]
  Never,
};

/// Prescribed motion of the endpoints of an open curve. The remaining
/// vertices move by curvature.
struct OpenEnds {
  Vec2 head_velocity;
  Vec2 tail_velocity;
};

struct FlowParams {
  double start_time = 0.0;
  double end_time = 0.0;
  double dt = 1e-5;
  double h = 1e-2;
  /// Radius of the arcs that replace corners before flowing; 0 means 5 h.
  double mollify_radius = 0.0;
  Scheme scheme = Scheme::Explicit;
  Redistribution redistribution = Redistribution::WhenDistorted;
  OpenEnds ends;
  /// Store every n-th state in FlowRun::states (first and last always kept).
  std::size_t snapshot_every = 0;
};

double mollify_radius(const FlowParams &p);

/// Throws LabError when the parameters are inconsistent (dt, h <= 0, end
/// before start, explicit step above the stability bound).
void check_params(const FlowParams &p);

struct Diagnostics {
  double length = 0.0;
  double total_curvature = 0.0;
  double max_curvature = 0.0;
};

Diagnostics diagnose(const PolyCurve &c);

struct FlowRun {
  std::vector<double> times;        ///< one entry per accepted step, including the start
  std::vector<Diagnostics> diagnostics;
  std::vector<double> snapshot_times;
  std::vector<PolyCurve> states;
  bool completed = false;
  std::string stop_reason;
  double failure_time = 0.0;
};

struct GraphRun {
  std::vector<double> times;
  std::vector<GraphCurve> states;
  bool completed = false;
  std::string stop_reason;
};

/// Called after every accepted step with the new time and state.
using FlowObserver = std::function<void(double, const PolyCurve &)>;
using GraphObserver = std::function<void(double, const GraphCurve &)>;

/// One step of the curve-shortening flow on a polyline: every free vertex
/// moves with the discrete curvature vector d^2C/ds^2. Throws StabilityError
/// when an edge shorter than 1e-3 h appears.
PolyCurve step_parametric(const PolyCurve &c, double dt, double h, Scheme scheme = Scheme::Explicit,
                          const OpenEnds &ends = {});

/// One semi-implicit step of u_t = u_yy / (1 + u_y^2) with Dirichlet data
/// from the boundary policy at the new time (endpoints held when none).
GraphCurve step_graph(const GraphCurve &g, double dt);

/// Redistributes vertices to uniform arclength spacing close to h (never
/// below it) by cubic Hermite interpolation along the polyline. Open curves
/// keep both endpoints.
PolyCurve resample(const PolyCurve &c, double h);

/// Replaces the corner at each listed vertex by a circular arc of the given
/// radius tangent to both adjacent edges.
PolyCurve round_corners(const PolyCurve &c, const std::vector<std::size_t> &vertices, double radius,
                        double h);

/// Index of the vertex nearest to p.
std::size_t nearest_vertex(const PolyCurve &c, Vec2 p);

FlowRun run_flow(const PolyCurve &initial, const FlowParams &params,
                 const FlowObserver &observer = {});

GraphRun run_flow(const GraphCurve &initial, const FlowParams &params,
                  const GraphObserver &observer = {});

} // namespace ancient

#pragma once

#include "ancient/chain.hpp"
#include "ancient/graph.hpp"
#include "ancient/reaper.hpp"

#include <cstddef>
#include <vector>

namespace ancient {

class NoBracket : public LabError {
public:
  using LabError::LabError;
};

class ThresholdError : public LabError {
public:
  using LabError::LabError;
};

class UnsupportedScenario : public LabError {
public:
  using LabError::LabError;
};

/// Intersection A_k(t) of the two solitons sharing the asymptote y = a_k.
///
/// Offsets from the asymptote become far smaller than the spacing of doubles
/// near a_k, so the corner is stored relative to it: the true height is
/// a_k + side * eta, and `location.y` is only its rounded value.
struct Corner {
  std::size_t index = 0;  ///< k
  std::size_t left = 0;   ///< position of soliton k in solitons()
  std::size_t right = 0;  ///< position of soliton k+1
  double height = 0.0;    ///< a_k
  int side = 1;           ///< +1 when the corner lies above a_k
  double eta = 0.0;       ///< |y(A_k) - a_k|
  double v_left = 0.0;
  double v_right = 0.0;
  Vec2 location;
  double angle = 0.0;        ///< Theta_k
  double c_k = 0.0;
  double predicted_x = 0.0;  ///< leading-order abscissa
  double x_residual = 0.0;   ///< location.x - predicted_x without cancellation
};

/// Locates A_k(t) by bisection in log(eta) on the half-gap interval next to
/// a_k. Requires the heights to alternate at k; throws NoBracket when the two
/// solitons do not change order on that interval at time t.
Corner corner(const ChainSpec &spec, std::size_t k, double t);

/// (v_k + v_{k+1}) * |y(A_k) - a_k|.
double corner_angle(const Corner &c);

/// Time below which every corner exists and every soliton that must be
/// glued reaches across both lines x = -1 and x = +1.
double find_t0(const ChainSpec &spec);

/// Smooth monotone cutoff: 0 for x <= -1, 1 for x >= 1, quintic smoothstep
/// in between, symmetric about x = 0.
double cutoff_eta(double x);
double cutoff_eta_derivative(double x);

/// One sampled soliton segment, parametrized by the soliton's own
/// arclength coordinate (see point_at_arclength).
struct Arc {
  std::size_t soliton = 0;
  double s_begin = 0.0;
  double s_end = 0.0;
  std::vector<Vec2> points;
};

/// Concatenation of soliton arcs joined at corners. Traversal is chosen so
/// the curve bends to the left.
struct BrokenCurve {
  double time = 0.0;
  bool closed = false;
  std::vector<ReaperSpec> solitons;
  std::vector<Arc> arcs;
  std::vector<Corner> corners;

  PolyCurve polyline() const;
};

/// Requires a convex scenario and t below find_t0.
BrokenCurve broken_curve(const ChainSpec &spec, double t, double h);

/// Smooth approximate curve of an embedded chain as x = u(y) on `grid`.
/// Throws ThresholdError unless t < find_t0(spec).
GraphCurve glued_graph(const ChainSpec &spec, double t, const std::vector<double> &grid);

/// Same on the exact grid of `grid` (anchors and offsets), which can resolve
/// glue zones closer to a_k than the spacing of doubles.
GraphCurve glued_graph(const ChainSpec &spec, double t, const GraphCurve &grid);

/// Grid of spacing h, graded towards every interior height finely enough to
/// resolve the glue zones at time t.
GraphCurve embedded_grid(const ChainSpec &spec, double t, double h);

/// The graph as a polyline, extended at both ends by the exact soliton arms
/// out past the y-axis.
PolyCurve graph_with_tails(const ChainSpec &spec, const GraphCurve &g, double h);

/// Approximate curve for any supported chain: corners where the heights
/// alternate, cutoff gluing in |x| <= 1 where they are monotone. Open ends
/// follow their asymptotes past the y-axis.
PolyCurve approximate_curve(const ChainSpec &spec, double t, double h);

/// One broken barrier per maximal alternating run plus the assembled curve.
struct BarrierAssembly {
  RunDecomposition runs;
  std::vector<BrokenCurve> barriers;
  PolyCurve glued;
};

BarrierAssembly barrier_chain(const ChainSpec &spec, double t, double h);

/// Distance below which an open end is considered to have reached its
/// asymptote.
inline constexpr double kAsymptoteTolerance = 1e-4;

/// Velocity with which the far end of a soliton arm translates.
Vec2 arm_velocity(const ReaperSpec &r);

} // namespace ancient

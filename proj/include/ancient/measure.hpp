#pragma once

#include "ancient/flow.hpp"
#include "ancient/geometry.hpp"
#include "ancient/glue.hpp"
#include "ancient/reaper.hpp"

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace ancient {

class OrientationError : public LabError {
public:
  using LabError::LabError;
};

class CrossingNotFound : public LabError {
public:
  using LabError::LabError;
};

class DegenerateFit : public LabError {
public:
  using LabError::LabError;
};

/// Trapezoidal integral of x dy along the polyline (including the closing
/// edge of a closed curve).
double line_integral_area(const PolyCurve &c);

struct AreaReport {
  double value = 0.0;
  double rate = std::numeric_limits<double>::quiet_NaN();
  double predicted_rate = std::numeric_limits<double>::quiet_NaN();
};

/// Closed curves: difference of the two line integrals. Open curves: the
/// circuit a, then the segment to the end of b, b backwards, and the segment
/// back to the start of a. Signed. Throws OrientationError when the circuit
/// is degenerate.
AreaReport area_between(const PolyCurve &a, const PolyCurve &b);

/// Same, with the rate from two snapshots dt apart (backward difference).
AreaReport area_between(const PolyCurve &a, const PolyCurve &b, const PolyCurve &a_prev,
                        const PolyCurve &b_prev, double dt);

/// Central differences of a sampled series; one-sided at the ends.
std::vector<double> derivative(const std::vector<double> &t, const std::vector<double> &v);

/// Sum of the corner angles.
double predicted_area_rate_convex(const std::vector<Corner> &corners);

/// A point located on a polyline: edge index plus fraction along that edge.
struct CurvePoint {
  Vec2 point;
  double param = 0.0;
};

/// Sign changes of x (crossings P) and of the tangent's x-component
/// (vertical tangents Q), each refined by linear interpolation.
struct CrossingReport {
  std::vector<CurvePoint> crossings;
  std::vector<CurvePoint> vertical_tangents;
};

CrossingReport crossings_and_tangents(const PolyCurve &c);

/// Portion of an open polyline between two parameters, endpoints interpolated.
PolyCurve sub_curve(const PolyCurve &c, double from, double to);

/// Unit tangent at a parameter (direction of the containing edge).
Vec2 tangent_at(const PolyCurve &c, double param);

/// The part of the soliton lying on its tip side of the line x = 0, sampled
/// with spacing about h and running from the lower crossing to the upper one.
/// Throws CrossingNotFound when the tip has not reached the other side.
PolyCurve soliton_tip_arc(const ReaperSpec &r, double t, double h);

/// Angles at the four corners of the region bounded by `arc` (a curve piece
/// from one y-axis crossing to the next), the y-axis and the soliton's tip
/// arc. theta2, theta3 belong to the soliton (analytic slope), theta1,
/// theta4 to the curve (numeric tangent). The area enclosed changes at rate
/// -theta1 + theta2 + theta3 - theta4.
struct AxisAngles {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;
  double theta4 = 0.0;
  double area = 0.0;  ///< unsigned area of the region

  double predicted_rate() const { return -theta1 + theta2 + theta3 - theta4; }
};

AxisAngles axis_angles(const PolyCurve &arc, const ReaperSpec &r, double t, double h);

/// Sum of |exterior turning angles|.
double total_curvature(const PolyCurve &c);

/// Signed discrete curvature at each vertex (0 at open endpoints).
std::vector<double> discrete_curvature(const PolyCurve &c);

/// -2 sum |kappa_s| over sign changes of the discrete curvature where
/// |kappa| exceeds `threshold` on both sides.
double inflection_dissipation(const PolyCurve &c, double threshold = 1e-6);

struct DissipationSample {
  double time = 0.0;
  double measured = 0.0;   ///< numeric dK/dt
  double predicted = 0.0;  ///< -2 sum |kappa_s|
};

/// Uses the stored snapshots of the run; needs at least three.
std::vector<DissipationSample> curvature_dissipation(const FlowRun &run, double threshold = 1e-6);

/// One-sided Hausdorff distance: max over vertices of c of the distance to
/// the polyline ref.
double strip_distance(const PolyCurve &c, const PolyCurve &ref);

struct RateFit {
  std::vector<std::pair<double, double>> samples;
  double delta = 0.0;
  double log_intercept = 0.0;
  double residual = 0.0;  ///< rms of the log residuals
};

/// Least-squares line through (t, ln value). Samples at or below `floor`
/// are dropped; throws DegenerateFit when fewer than three remain.
RateFit fit_rate(const std::vector<std::pair<double, double>> &samples, double floor = 1e-14);

} // namespace ancient

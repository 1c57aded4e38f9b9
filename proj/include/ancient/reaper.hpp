#pragma once

#include "ancient/geometry.hpp"

namespace ancient {

class DomainError : public LabError {
public:
  using LabError::LabError;
};

/// One translating Grim Reaper
///
///   x - C = parity * ( G(v * (y - low)) / v + v * t ),   G(s) = -ln sin s,
///
/// living in the open strip low < y < high with v = pi / (high - low).
/// Parity +1 puts the tip on the left for t < 0 (arms open to +x) and the
/// tip travels towards +x; parity -1 is the mirror image.
struct ReaperSpec {
  double low = 0.0;
  double high = 1.0;
  double shift = 0.0;
  int parity = 1;
  double velocity = kPi;

  double width() const { return high - low; }
  double midline() const { return 0.5 * (low + high); }
};

/// Builds a soliton on the strip between two distinct heights (either order).
ReaperSpec make_reaper(double a, double b, double shift, int parity);

enum class Branch { Lower, Upper };

/// G(s) = -ln sin s on (0, pi).
double profile(double s);

/// x-coordinate of the soliton at height y.
double x_of_y(const ReaperSpec &r, double y, double t);

/// x-coordinate at distance `eta` from the asymptote `side` selects. Stays
/// accurate when eta is far below the spacing of doubles near the asymptote.
double x_at_offset(const ReaperSpec &r, Branch side, double eta, double t);

/// Exponent phi with sin(v * eta) = e^phi at abscissa x.
double branch_exponent(const ReaperSpec &r, double x, double t);

/// Distance from the hugged asymptote of either branch at abscissa x:
/// eta = arcsin(e^phi) / v. Throws DomainError when e^phi > 1.
double offset_of_x(const ReaperSpec &r, double x, double t);

/// Inverse of x_of_y on one branch.
double y_of_x_branch(const ReaperSpec &r, Branch branch, double x, double t);

/// dy/dx along a branch, from differentiating arcsin(e^phi).
double branch_slope(const ReaperSpec &r, Branch branch, double x, double t);

/// dx/dy of the graph x = x_of_y(y).
double dx_dy(const ReaperSpec &r, double y);

/// Angle between the tangent at height y and the x-axis; equals v * eta with
/// eta the distance to the nearer asymptote.
double tangent_angle(const ReaperSpec &r, double y);
double tangent_angle_at_offset(const ReaperSpec &r, double eta);

/// Point on the midline where G attains its minimum.
Vec2 tip(const ReaperSpec &r, double t);

/// Arclength coordinate along the soliton: s = ln tan(psi / 2) / v with
/// psi = v (y - low). s = 0 at the tip, s -> -inf at the lower asymptote.
struct ReaperPoint {
  Vec2 position;
  double eta_low = 0.0;   ///< y - low, computed without cancellation
  double eta_high = 0.0;  ///< high - y
  Vec2 tangent;           ///< unit tangent pointing towards increasing s
};

ReaperPoint point_at_arclength(const ReaperSpec &r, double s, double t);
double arclength_at_offset(const ReaperSpec &r, Branch side, double eta);

/// Normal distance from p to the soliton, |x - X(y)| * sin(v * eta), valid
/// for points inside the strip.
double normal_distance(const ReaperSpec &r, Vec2 p, double t);

} // namespace ancient

#include "ancient/reaper.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ancient {

namespace {

// -ln sin(s) for s in (0, pi/2], accurate for tiny s.
double log_cosecant(double s) { return -std::log(std::sin(s)); }

std::string fmt(const char *what, double value) {
  std::ostringstream os;
  os.precision(17);
  os << what << " " << value;
  return os.str();
}

} // namespace

ReaperSpec make_reaper(double a, double b, double shift, int parity) {
  if (!(a != b) || !std::isfinite(a) || !std::isfinite(b))
    throw DomainError("reaper asymptotes must be distinct finite heights");
  ReaperSpec r;
  r.low = std::min(a, b);
  r.high = std::max(a, b);
  r.shift = shift;
  r.parity = parity >= 0 ? 1 : -1;
  r.velocity = kPi / (r.high - r.low);
  return r;
}

double profile(double s) {
  if (!(s > 0.0 && s < kPi)) throw DomainError(fmt("profile argument outside (0, pi):", s));
  return log_cosecant(s <= 0.5 * kPi ? s : kPi - s);
}

double x_at_offset(const ReaperSpec &r, Branch, double eta, double t) {
  const double v = r.velocity;
  const double half = 0.5 * r.width();
  if (!(eta > 0.0 && eta <= half)) {
    // Offsets beyond the midline belong to the other branch.
    if (eta > half && eta < r.width()) eta = r.width() - eta;
    else throw DomainError(fmt("offset outside the strip:", eta));
  }
  return r.shift + r.parity * (log_cosecant(v * eta) / v + v * t);
}

double x_of_y(const ReaperSpec &r, double y, double t) {
  if (!(y > r.low && y < r.high)) throw DomainError(fmt("height outside the open strip:", y));
  const double d_low = y - r.low;
  const double d_high = r.high - y;
  return d_low <= d_high ? x_at_offset(r, Branch::Lower, d_low, t)
                         : x_at_offset(r, Branch::Upper, d_high, t);
}

double branch_exponent(const ReaperSpec &r, double x, double t) {
  const double v = r.velocity;
  return v * v * t - r.parity * v * (x - r.shift);
}

double offset_of_x(const ReaperSpec &r, double x, double t) {
  const double phi = branch_exponent(r, x, t);
  if (phi > 0.0) throw DomainError(fmt("abscissa beyond the tip, exponent", phi));
  return std::asin(std::exp(phi)) / r.velocity;
}

double y_of_x_branch(const ReaperSpec &r, Branch branch, double x, double t) {
  const double eta = offset_of_x(r, x, t);
  return branch == Branch::Lower ? r.low + eta : r.high - eta;
}

double branch_slope(const ReaperSpec &r, Branch branch, double x, double t) {
  const double phi = branch_exponent(r, x, t);
  if (phi > 0.0) throw DomainError(fmt("abscissa beyond the tip, exponent", phi));
  const double e = std::exp(phi);
  // d/dx arcsin(e^phi)/v = e^phi * phi_x / (v sqrt(1 - e^{2 phi})), phi_x = -parity v
  const double lower = -r.parity * e / std::sqrt((1.0 - e) * (1.0 + e));
  return branch == Branch::Lower ? lower : -lower;
}

double dx_dy(const ReaperSpec &r, double y) {
  if (!(y > r.low && y < r.high)) throw DomainError(fmt("height outside the open strip:", y));
  const double v = r.velocity;
  // d/dy G(v (y - low)) / v = -cot(v (y - low))
  return -r.parity / std::tan(v * (y - r.low));
}

double tangent_angle_at_offset(const ReaperSpec &r, double eta) {
  if (!(eta >= 0.0 && eta <= 0.5 * r.width())) throw DomainError(fmt("offset outside half strip:", eta));
  return r.velocity * eta;
}

double tangent_angle(const ReaperSpec &r, double y) {
  if (!(y > r.low && y < r.high)) throw DomainError(fmt("height outside the open strip:", y));
  return tangent_angle_at_offset(r, std::min(y - r.low, r.high - y));
}

Vec2 tip(const ReaperSpec &r, double t) {
  return {r.shift + r.parity * r.velocity * t, r.midline()};
}

ReaperPoint point_at_arclength(const ReaperSpec &r, double s, double t) {
  const double v = r.velocity;
  // psi = 2 atan(e^{v s}); pi - psi = 2 atan(e^{-v s})
  const double psi_low = 2.0 * std::atan(std::exp(v * s));
  const double psi_high = 2.0 * std::atan(std::exp(-v * s));
  ReaperPoint p;
  p.eta_low = psi_low / v;
  p.eta_high = psi_high / v;
  const double sin_psi = std::sin(std::min(psi_low, psi_high));
  const double x = r.shift + r.parity * (-std::log(sin_psi) / v + v * t);
  const double y = s <= 0.0 ? r.low + p.eta_low : r.high - p.eta_high;
  p.position = {x, y};
  // dx/ds = parity * (-cos psi), dy/ds = sin psi with psi measured from low.
  const double cos_psi = s <= 0.0 ? std::cos(psi_low) : -std::cos(psi_high);
  p.tangent = {-r.parity * cos_psi, sin_psi};
  return p;
}

double arclength_at_offset(const ReaperSpec &r, Branch side, double eta) {
  const double v = r.velocity;
  const double s = std::log(std::tan(0.5 * v * eta)) / v;
  return side == Branch::Lower ? s : -s;
}

double normal_distance(const ReaperSpec &r, Vec2 p, double t) {
  const double eta = std::min(p.y - r.low, r.high - p.y);
  if (!(eta > 0.0)) throw DomainError(fmt("point outside the strip at height", p.y));
  return std::abs(p.x - x_of_y(r, p.y, t)) * std::sin(r.velocity * eta);
}

} // namespace ancient

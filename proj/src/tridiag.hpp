#pragma once

#include <vector>

namespace ancient::detail {

// Thomas algorithm. lower[0] and upper[n-1] are ignored.
template <class T>
std::vector<T> solve_tridiagonal(const std::vector<double> &lower, const std::vector<double> &diag,
                                 const std::vector<double> &upper, std::vector<T> rhs) {
  const std::size_t n = diag.size();
  std::vector<double> c(n);
  double d = diag[0];
  c[0] = n > 1 ? upper[0] / d : 0.0;
  rhs[0] = rhs[0] * (1.0 / d);
  for (std::size_t i = 1; i < n; ++i) {
    d = diag[i] - lower[i] * c[i - 1];
    c[i] = i + 1 < n ? upper[i] / d : 0.0;
    rhs[i] = (rhs[i] - rhs[i - 1] * lower[i]) * (1.0 / d);
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = rhs[i] - rhs[i + 1] * c[i];
  return rhs;
}

// Same solve for rows -lower x[i-1] + (excess + lower + upper) x[i] - upper x[i+1]
// with lower, upper, excess >= 0. Pivots are built from the excess, so huge
// couplings do not swamp it.
inline std::vector<double> solve_m_matrix(const std::vector<double> &lower, const std::vector<double> &excess,
                                          const std::vector<double> &upper, std::vector<double> rhs) {
  const std::size_t n = excess.size();
  std::vector<double> c(n, 0.0);
  double e = excess[0] + lower[0];
  double d = e + upper[0];
  c[0] = upper[0] / d;
  rhs[0] /= d;
  for (std::size_t i = 1; i < n; ++i) {
    e = excess[i] + lower[i] * (e / d);
    d = e + upper[i];
    c[i] = upper[i] / d;
    rhs[i] = (rhs[i] + lower[i] * rhs[i - 1]) / d;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] += c[i] * rhs[i + 1];
  return rhs;
}

// Cyclic tridiagonal system: lower[0] couples row 0 to x[n-1], upper[n-1]
// couples row n-1 to x[0]. Sherman-Morrison on top of the Thomas solve.
template <class T>
std::vector<T> solve_cyclic(std::vector<double> lower, std::vector<double> diag,
                            std::vector<double> upper, const std::vector<T> &rhs) {
  const std::size_t n = diag.size();
  const double alpha = upper[n - 1];
  const double beta = lower[0];
  const double gamma = -diag[0];
  diag[0] -= gamma;
  diag[n - 1] -= alpha * beta / gamma;
  auto x = solve_tridiagonal(lower, diag, upper, rhs);
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = alpha;
  auto z = solve_tridiagonal(lower, diag, upper, u);
  const double factor_den = 1.0 + z[0] + beta * z[n - 1] / gamma;
  const T factor_num = x[0] + x[n - 1] * (beta / gamma);
  for (std::size_t i = 0; i < n; ++i) x[i] = x[i] - factor_num * (z[i] / factor_den);
  return x;
}

} // namespace ancient::detail

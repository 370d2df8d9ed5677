#pragma once

#include <cmath>
#include <numbers>

// Orthonormal polynomials for the weight (1 - t^2)^{alpha - 1/2} on [-1, 1]
// (Gegenbauer polynomials rescaled to unit norm):
//   t q_n = a_{n+1} q_{n+1} + a_n q_{n-1},   q_0 = 1 / sqrt(mu_0).

namespace sphlab::detail {

inline double ortho_offdiag(int n, double alpha) {
  const double dn = n;
  return 0.5 * std::sqrt(dn * (dn + 2.0 * alpha - 1.0) / ((dn + alpha) * (dn + alpha - 1.0)));
}

inline double ortho_mass(double alpha) {
  return std::sqrt(std::numbers::pi) * std::exp(std::lgamma(alpha + 0.5) - std::lgamma(alpha + 1.0));
}

/// q_n(t) by the upward recurrence.
inline double ortho_eval(int n, double alpha, double t) {
  double prev = 0.0;
  double cur = 1.0 / std::sqrt(ortho_mass(alpha));
  double a_prev = 0.0;
  for (int k = 0; k < n; ++k) {
    const double a_next = ortho_offdiag(k + 1, alpha);
    const double next = (t * cur - a_prev * prev) / a_next;
    prev = cur;
    cur = next;
    a_prev = a_next;
  }
  return cur;
}

}  // namespace sphlab::detail

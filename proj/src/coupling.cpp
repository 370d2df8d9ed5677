#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>

#include "sphlab/coupling.hpp"

namespace sphlab {

namespace {

double gaunt_prefactor(int l1, int l2, int L) {
  return std::sqrt((2.0 * l1 + 1.0) * (2.0 * l2 + 1.0) * (2.0 * L + 1.0) / (4.0 * std::numbers::pi));
}

}  // namespace

double gaunt_coeff(int l1, int m1, int l2, int m2, int L, int M) {
  if (M != m1 + m2) return 0.0;
  const TripleIndex coupling{l1, l2, L, m1, m2, -M};
  if (!coupling.selected()) return 0.0;
  if ((l1 + l2 + L) % 2 != 0) return 0.0;
  const double parity = wigner_3j({l1, l2, L, 0, 0, 0});
  const double sign = (M % 2 == 0) ? 1.0 : -1.0;
  return sign * gaunt_prefactor(l1, l2, L) * parity * wigner_3j(coupling);
}

ProductExpansion product_expand(const CoefficientVector& f, const CoefficientVector& g) {
  const auto p_opt = f.single_degree();
  const auto q_opt = g.single_degree();
  if (!p_opt || !q_opt) throw std::invalid_argument("product_expand: each factor must lie in a single eigenspace");
  const int p = *p_opt;
  const int q = *q_opt;

  ProductExpansion out{p, q, CoefficientVector(p + q)};
  for (int L = std::abs(p - q); L <= p + q; ++L) {
    if ((p + q + L) % 2 != 0) continue;
    const double radial = gaunt_prefactor(p, q, L) * wigner_3j({p, q, L, 0, 0, 0});
    for (int M = -L; M <= L; ++M) {
      complex sum = 0.0;
      const int lo = std::max(-p, M - q);
      const int hi = std::min(p, M + q);
      for (int m1 = lo; m1 <= hi; ++m1) {
        const complex fg = f(p, m1) * g(q, M - m1);
        if (fg == complex{}) continue;
        sum += fg * wigner_3j({p, q, L, m1, M - m1, -M});
      }
      out.coefficients(L, M) = ((M % 2 == 0) ? radial : -radial) * sum;
    }
  }
  return out;
}

}  // namespace sphlab

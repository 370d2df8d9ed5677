#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sphlab/harmonics.hpp"

namespace sphlab {

struct TripleIndex {
  int l1 = 0, l2 = 0, l3 = 0;
  int m1 = 0, m2 = 0, m3 = 0;

  bool triangle() const;
  bool m_sum_zero() const { return m1 + m2 + m3 == 0; }
  bool m_in_range() const;
  /// All selection rules hold, so the symbol may be nonzero.
  bool selected() const { return triangle() && m_sum_zero() && m_in_range(); }
};

/// Largest l for which wigner_3j uses the exact rational backend.
inline constexpr int kExact3jMaxL = 200;

/// Wigner 3j symbol; zero when a selection rule fails.
double wigner_3j(const TripleIndex& t);

/// Racah sum in exact big-integer arithmetic over prime-factorized factorials.
double wigner_3j_exact(const TripleIndex& t);

/// Three-term recurrence in m2 (m1 + m2 + m3 = 0 held fixed), solved from both
/// ends and normalized by the orthogonality sum. Used above kExact3jMaxL.
double wigner_3j_recurrence(const TripleIndex& t);

/// Integral over S^2 of Y_{l1}^{m1} Y_{l2}^{m2} conj(Y_L^M).
double gaunt_coeff(int l1, int m1, int l2, int m2, int L, int M);

/// Expansion of a product of two single-degree elements over Y_L^M,
/// |p - q| <= L <= p + q.
struct ProductExpansion {
  int p = 0;
  int q = 0;
  CoefficientVector coefficients;  // max degree p + q

  double norm() const { return coefficients.norm(); }
};

ProductExpansion product_expand(const CoefficientVector& f, const CoefficientVector& g);

struct BilinearOptions {
  int starts = 8;
  double tol = 1e-10;
  int max_iters = 500;
  std::uint64_t seed = 0;
  /// Extra starting pairs (unit or not; they are normalized). The result is
  /// never below ||f g||_2 of any of them.
  std::vector<std::pair<CoefficientVector, CoefficientVector>> warm_starts;
};

struct BilinearConstant {
  double value = 0.0;
  CoefficientVector f;
  CoefficientVector g;
  bool converged = false;
  int iterations = 0;
  /// Best value after each half-step of the winning start.
  std::vector<double> history;
};

/// Approximate sup of ||f g||_{L^2(S^2)} over unit f in H_p, g in H_q, by
/// alternating top-singular-vector updates with multistart.
BilinearConstant best_bilinear_constant(int p, int q, const BilinearOptions& opts = {});

}  // namespace sphlab

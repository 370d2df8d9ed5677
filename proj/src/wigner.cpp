#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "sphlab/coupling.hpp"

namespace sphlab {

bool TripleIndex::triangle() const {
  return l1 >= 0 && l2 >= 0 && l3 >= 0 && l3 <= l1 + l2 && l3 >= std::abs(l1 - l2);
}

bool TripleIndex::m_in_range() const {
  return std::abs(m1) <= l1 && std::abs(m2) <= l2 && std::abs(m3) <= l3;
}

namespace {

int sign_of_power(long long e) { return (e % 2 == 0) ? 1 : -1; }

std::vector<int> primes_up_to(int n) {
  std::vector<bool> composite(static_cast<std::size_t>(std::max(n, 1)) + 1, false);
  std::vector<int> primes;
  for (int i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (long long j = static_cast<long long>(i) * i; j <= n; j += i) composite[static_cast<std::size_t>(j)] = true;
  }
  return primes;
}

/// Exponents of each prime in a product/quotient of factorials.
class FactorialExponents {
 public:
  explicit FactorialExponents(const std::vector<int>& primes) : primes_(primes), exps_(primes.size(), 0) {}

  void add_factorial(int n, int multiplicity) {
    for (std::size_t i = 0; i < primes_.size() && primes_[i] <= n; ++i) {
      int e = 0;
      for (long long pk = primes_[i]; pk <= n; pk *= primes_[i]) e += static_cast<int>(n / pk);
      exps_[i] += multiplicity * e;
    }
  }

  /// Splits into numerator and denominator integers.
  void to_fraction(mpz_class& num, mpz_class& den) const {
    num = 1;
    den = 1;
    mpz_class pk;
    for (std::size_t i = 0; i < primes_.size(); ++i) {
      const int e = exps_[i];
      if (e == 0) continue;
      mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(primes_[i]), static_cast<unsigned long>(std::abs(e)));
      if (e > 0) {
        num *= pk;
      } else {
        den *= pk;
      }
    }
  }

 private:
  const std::vector<int>& primes_;
  std::vector<int> exps_;
};

const std::vector<int>& primes_for(int n) {
  static const std::vector<int> table = primes_up_to(4 * kExact3jMaxL + 8);
  if (n <= table.back()) return table;
  thread_local std::vector<int> extended;
  if (extended.empty() || extended.back() < n) extended = primes_up_to(2 * n);
  return extended;
}

/// sqrt(x / y) for positive big integers, to double precision.
double sqrt_ratio(const mpz_class& x, const mpz_class& y) {
  long ex = 0;
  long ey = 0;
  const double mx = mpz_get_d_2exp(&ex, x.get_mpz_t());
  const double my = mpz_get_d_2exp(&ey, y.get_mpz_t());
  double ratio = mx / my;
  long e = ex - ey;
  if (e % 2 != 0) {
    ratio *= 2.0;
    e -= 1;
  }
  return std::ldexp(std::sqrt(ratio), static_cast<int>(e / 2));
}

}  // namespace

double wigner_3j_exact(const TripleIndex& t) {
  if (!t.selected()) return 0.0;
  const int l1 = t.l1, l2 = t.l2, l3 = t.l3, m1 = t.m1, m2 = t.m2, m3 = t.m3;

  const int a1 = l3 - l2 + m1;
  const int a2 = l3 - l1 - m2;
  const int b1 = l1 + l2 - l3;
  const int b2 = l1 - m1;
  const int b3 = l2 + m2;
  const int kmin = std::max({0, -a1, -a2});
  const int kmax = std::min({b1, b2, b3});
  if (kmin > kmax) return 0.0;

  // Racah sum as (-1)^kmin / D_kmin * (P / Q), with P / Q accumulated by
  // Horner's rule over the term ratios.
  mpz_class P = 1;
  mpz_class Q = 1;
  for (int k = kmax - 1; k >= kmin; --k) {
    const mpz_class num = mpz_class(b1 - k) * (b2 - k) * (b3 - k);
    const mpz_class den = mpz_class(k + 1) * (a1 + k + 1) * (a2 + k + 1);
    P = den * Q - num * P;
    Q = den * Q;
  }
  if (P == 0) return 0.0;

  const std::vector<int>& primes = primes_for(l1 + l2 + l3 + 1);
  FactorialExponents radicand(primes);
  radicand.add_factorial(l1 + l2 - l3, 1);
  radicand.add_factorial(l1 - l2 + l3, 1);
  radicand.add_factorial(-l1 + l2 + l3, 1);
  radicand.add_factorial(l1 + l2 + l3 + 1, -1);
  for (const auto& [l, m] : {std::pair{l1, m1}, std::pair{l2, m2}, std::pair{l3, m3}}) {
    radicand.add_factorial(l + m, 1);
    radicand.add_factorial(l - m, 1);
  }
  // 1 / D_kmin, squared under the root
  radicand.add_factorial(kmin, -2);
  radicand.add_factorial(a1 + kmin, -2);
  radicand.add_factorial(a2 + kmin, -2);
  radicand.add_factorial(b1 - kmin, -2);
  radicand.add_factorial(b2 - kmin, -2);
  radicand.add_factorial(b3 - kmin, -2);

  mpz_class num;
  mpz_class den;
  radicand.to_fraction(num, den);
  const int sign = sign_of_power(static_cast<long long>(l1) - l2 - m3 + kmin) * (sgn(P) * sgn(Q));
  const mpz_class x = P * P * num;
  const mpz_class y = Q * Q * den;
  return sign * sqrt_ratio(x, y);
}

double wigner_3j_recurrence(const TripleIndex& t) {
  if (!t.selected()) return 0.0;
  const double j1 = t.l1, j2 = t.l2, j3 = t.l3;
  const int m1 = t.m1;
  const int lo = std::max(-t.l2, -m1 - t.l3);
  const int hi = std::min(t.l2, -m1 + t.l3);
  const int n = hi - lo + 1;

  auto m3_of = [m1](int m2) { return -m1 - m2; };
  auto diag = [&](int m2) {
    const double m3 = m3_of(m2);
    return j1 * (j1 + 1) - j2 * (j2 + 1) - j3 * (j3 + 1) - 2.0 * m2 * m3;
  };
  // couples m2 - 1 and m2
  auto off = [&](int m2) {
    const double m3 = m3_of(m2);
    const double v = (j2 - m2 + 1) * (j2 + m2) * (j3 + m3 + 1) * (j3 - m3);
    return v > 0.0 ? std::sqrt(v) : 0.0;
  };

  constexpr double kBig = 1e150;
  std::vector<double> fwd(static_cast<std::size_t>(n), 0.0);
  std::vector<double> bwd(static_cast<std::size_t>(n), 0.0);
  fwd[0] = 1.0;
  for (int i = 0; i + 1 < n; ++i) {
    const int m2 = lo + i;
    const double prev = i > 0 ? fwd[i - 1] : 0.0;
    fwd[i + 1] = (diag(m2) * fwd[i] - off(m2) * prev) / off(m2 + 1);
    if (std::abs(fwd[i + 1]) > kBig) {
      for (int k = 0; k <= i + 1; ++k) fwd[k] /= kBig;
    }
  }
  bwd[n - 1] = 1.0;
  for (int i = n - 1; i > 0; --i) {
    const int m2 = lo + i;
    const double next = i + 1 < n ? bwd[i + 1] : 0.0;
    bwd[i - 1] = (diag(m2) * bwd[i] - off(m2 + 1) * next) / off(m2);
    if (std::abs(bwd[i - 1]) > kBig) {
      for (int k = i - 1; k < n; ++k) bwd[k] /= kBig;
    }
  }

  // Splice where the backward solution first stops growing: forward is
  // stable up to there, backward from there on.
  int split = n - 1;
  while (split > 0 && std::abs(bwd[split - 1]) >= std::abs(bwd[split])) --split;
  double fg = 0.0;
  double gg = 0.0;
  for (int i = std::max(0, split - 1); i <= std::min(n - 1, split + 1); ++i) {
    fg += fwd[i] * bwd[i];
    gg += bwd[i] * bwd[i];
  }
  const double scale = fg / gg;
  std::vector<double> h(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) h[i] = i < split ? fwd[i] : scale * bwd[i];

  double norm = 0.0;
  for (double v : h) norm += v * v;
  norm = std::sqrt((2.0 * j1 + 1.0) * norm);

  // Sign at the lower end from the single-term Racah cases.
  int sign_lo = 0;
  if (lo == -t.l2) {
    sign_lo = sign_of_power(static_cast<long long>(t.l1) - t.l2 - m3_of(lo));
  } else {
    sign_lo = sign_of_power(static_cast<long long>(t.l1) - t.l3 + lo);
  }
  const double orient = (h[0] >= 0.0 ? 1.0 : -1.0) * sign_lo;
  return orient * h[t.m2 - lo] / norm;
}

double wigner_3j(const TripleIndex& t) {
  if (!t.selected()) return 0.0;
  if (std::max({t.l1, t.l2, t.l3}) <= kExact3jMaxL) return wigner_3j_exact(t);
  return wigner_3j_recurrence(t);
}

}  // namespace sphlab

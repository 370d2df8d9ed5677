#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "sphlab/coupling.hpp"
#include "sphlab/harmonics.hpp"
#include "sphlab/quadrature.hpp"
#include "sphlab/s2_grid.hpp"

using namespace sphlab;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

double w3j(int l1, int l2, int l3, int m1, int m2, int m3) { return wigner_3j({l1, l2, l3, m1, m2, m3}); }

// ||f g||_2 by an exact product rule, independent of the Gaunt path.
double product_norm_quadrature(const CoefficientVector& f, const CoefficientVector& g) {
  const int deg = f.max_degree() + g.max_degree();
  const S2Grid grid(std::max(f.max_degree(), g.max_degree()), 2 * deg);
  const auto vf = grid.synthesize(f);
  const auto vg = grid.synthesize(g);
  std::vector<complex> prod(vf.size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = vf[i] * vg[i];
  return lp_norm_values(std::span<const complex>(prod), grid.rule(), 2.0);
}

}  // namespace

TEST_CASE("wigner_3j: worked values") {
  CHECK(w3j(1, 1, 5, 0, 0, 0) == 0.0);
  CHECK(w3j(1, 1, 0, 0, 0, 0) == Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  for (int l = 0; l <= 30; ++l) {
    for (int m = -l; m <= l; ++m) {
      const double sign = (l - m) % 2 == 0 ? 1.0 : -1.0;
      CHECK(std::abs(w3j(l, l, 0, m, -m, 0) - sign / std::sqrt(2.0 * l + 1)) <= 1e-14);
    }
  }
  CHECK(w3j(2, 2, 2, 1, 1, -1) == 0.0);  // m sum
  CHECK(w3j(2, 2, 2, 3, -3, 0) == 0.0);  // |m| > l
  CHECK(w3j(1, 1, 1, 0, 0, 0) == 0.0);   // odd l sum with zero m's
}

TEST_CASE("TripleIndex predicates") {
  CHECK(TripleIndex{1, 1, 2, 0, 0, 0}.selected());
  CHECK_FALSE(TripleIndex{1, 1, 3, 0, 0, 0}.triangle());
  CHECK_FALSE(TripleIndex{1, 1, 2, 1, 0, 0}.m_sum_zero());
  CHECK_FALSE(TripleIndex{1, 1, 2, 2, -2, 0}.m_in_range());
}

TEST_CASE("wigner_3j matches an independent Racah evaluation for l <= 12") {
  double worst = 0.0;
  for (int l1 = 0; l1 <= 12; ++l1)
    for (int l2 = 0; l2 <= 12; ++l2)
      for (int l3 = std::abs(l1 - l2); l3 <= std::min(12, l1 + l2); ++l3)
        for (int m1 = -l1; m1 <= l1; m1 += 2)
          for (int m2 = -l2; m2 <= l2; ++m2) {
            const int m3 = -m1 - m2;
            if (std::abs(m3) > l3) continue;
            const double ref = static_cast<double>(oracle::wigner_3j_racah(l1, l2, l3, m1, m2, m3));
            worst = std::max(worst, std::abs(w3j(l1, l2, l3, m1, m2, m3) - ref));
          }
  CHECK(worst <= 1e-12);
}

TEST_CASE("wigner_3j symmetries, exhaustive for l <= 10") {
  int bad = 0;
  for (int l1 = 0; l1 <= 10; ++l1)
    for (int l2 = 0; l2 <= 10; ++l2)
      for (int l3 = std::abs(l1 - l2); l3 <= std::min(10, l1 + l2); ++l3)
        for (int m1 = -l1; m1 <= l1; ++m1)
          for (int m2 = -l2; m2 <= l2; ++m2) {
            const int m3 = -m1 - m2;
            if (std::abs(m3) > l3) continue;
            const double v = w3j(l1, l2, l3, m1, m2, m3);
            const double odd = (l1 + l2 + l3) % 2 == 0 ? 1.0 : -1.0;
            const double cyc1 = w3j(l2, l3, l1, m2, m3, m1);
            const double cyc2 = w3j(l3, l1, l2, m3, m1, m2);
            const double swap = w3j(l2, l1, l3, m2, m1, m3);
            const double swap2 = w3j(l1, l3, l2, m1, m3, m2);
            const double flip = w3j(l1, l2, l3, -m1, -m2, -m3);
            if (std::abs(cyc1 - v) > 1e-14 || std::abs(cyc2 - v) > 1e-14 || std::abs(swap - odd * v) > 1e-14 ||
                std::abs(swap2 - odd * v) > 1e-14 || std::abs(flip - odd * v) > 1e-14)
              ++bad;
          }
  CHECK(bad == 0);
}

TEST_CASE("wigner_3j orthogonality sums for l <= 10") {
  double worst = 0.0;
  for (int l1 = 0; l1 <= 10; ++l1)
    for (int l2 = 0; l2 <= 10; ++l2)
      for (int l3 = std::abs(l1 - l2); l3 <= std::min(10, l1 + l2); ++l3)
        for (int m3 = -l3; m3 <= l3; ++m3) {
          double sum = 0.0;
          for (int m1 = -l1; m1 <= l1; ++m1) {
            const int m2 = -m1 - m3;
            if (std::abs(m2) > l2) continue;
            const double v = w3j(l1, l2, l3, m1, m2, m3);
            sum += (2 * l3 + 1) * v * v;
          }
          worst = std::max(worst, std::abs(sum - 1.0));
        }
  CHECK(worst <= 1e-12);
}

TEST_CASE("exact and recurrence backends agree") {
  for (auto [l1, l2, l3] : std::array<std::array<int, 3>, 5>{{{30, 25, 40}, {60, 60, 80}, {120, 90, 150}, {200, 180, 199}, {17, 17, 0}}}) {
    for (int m1 : {-l1, -l1 / 3, 0, 1, l1 / 2}) {
      for (int m2 : {-l2 / 2, 0, 3, l2}) {
        const int m3 = -m1 - m2;
        const TripleIndex t{l1, l2, l3, m1, m2, m3};
        if (!t.selected()) continue;
        CHECK(std::abs(wigner_3j_exact(t) - wigner_3j_recurrence(t)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("recurrence backend above the exact threshold is orthonormal") {
  const int l1 = 260, l2 = 230, m3 = 7;
  for (int l3 : {40, 301, 489}) {
    double sum = 0.0;
    for (int m1 = -l1; m1 <= l1; ++m1) {
      const int m2 = -m1 - m3;
      if (std::abs(m2) > l2) continue;
      const double v = w3j(l1, l2, l3, m1, m2, m3);
      sum += (2 * l3 + 1) * v * v;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-9);
  }
}

TEST_CASE("gaunt_coeff: worked values and selection") {
  CHECK(gaunt_coeff(0, 0, 0, 0, 0, 0) == Approx(1.0 / std::sqrt(4 * kPi)).epsilon(1e-14));
  CHECK(gaunt_coeff(2, 1, 3, 1, 4, 1) == 0.0);
  CHECK(gaunt_coeff(1, 0, 1, 0, 3, 0) == 0.0);
}

TEST_CASE("gaunt_coeff matches a one-dimensional Legendre oracle for l <= 20") {
  // Integrate the azimuth analytically: 2 pi delta_{M, m1 + m2} int P P P dt.
  const LineRule line = gauss_legendre(32);
  constexpr int kMax = 20;
  std::vector<std::vector<double>> theta((kMax + 1) * (2 * kMax + 1), std::vector<double>(line.nodes.size()));
  auto slot = [](int l, int m) { return static_cast<std::size_t>(l * (2 * kMax + 1) + m + kMax); };
  for (int l = 0; l <= kMax; ++l)
    for (int m = -l; m <= l; ++m)
      for (std::size_t i = 0; i < line.nodes.size(); ++i) theta[slot(l, m)][i] = oracle::ylm_theta(l, m, line.nodes[i]);
  double worst = 0.0;
  long checked = 0;
  for (int l1 = 0; l1 <= kMax; ++l1)
    for (int l2 = 0; l2 <= kMax; ++l2)
      for (int L = std::abs(l1 - l2); L <= std::min(kMax, l1 + l2); L += 2)  // odd l1 + l2 + L vanish by parity
        for (int m1 = -l1; m1 <= l1; m1 += 3)
          for (int m2 = -l2; m2 <= l2; m2 += 2) {
            const int M = m1 + m2;
            if (std::abs(M) > L) continue;
            double s = 0.0;
            for (std::size_t i = 0; i < line.nodes.size(); ++i)
              s += line.weights[i] * theta[slot(l1, m1)][i] * theta[slot(l2, m2)][i] * theta[slot(L, M)][i];
            worst = std::max(worst, std::abs(gaunt_coeff(l1, m1, l2, m2, L, M) - 2 * kPi * s));
            ++checked;
          }
  INFO("checked " << checked);
  CHECK(worst <= 1e-9);
}

TEST_CASE("gaunt_coeff matches full sphere quadrature for small l") {
  const SphereRule rule = sphere_rule(2, 12);
  double worst = 0.0;
  for (int l1 = 0; l1 <= 4; ++l1)
    for (int l2 = 0; l2 <= 4; ++l2)
      for (int L = 0; L <= 4; ++L)
        for (int m1 = -l1; m1 <= l1; ++m1)
          for (int m2 = -l2; m2 <= l2; ++m2)
            for (int M = -L; M <= L; ++M) {
              complex s = 0.0;
              for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const auto& x = rule.nodes[i];
                s += rule.weights[i] * sph_basis_s2(l1, m1, x) * sph_basis_s2(l2, m2, x) * std::conj(sph_basis_s2(L, M, x));
              }
              worst = std::max(worst, std::abs(gaunt_coeff(l1, m1, l2, m2, L, M) - s));
            }
  CHECK(worst <= 1e-12);
}

TEST_CASE("product_expand: constants and Y_0^0") {
  CoefficientVector one(0);
  one(0, 0) = 1.0;
  const CoefficientVector g = random_harmonic_s2(5, 3);
  const ProductExpansion e = product_expand(one, g);
  CHECK(e.p == 0);
  CHECK(e.q == 5);
  for (int l = 0; l <= e.coefficients.max_degree(); ++l)
    for (int m = -l; m <= l; ++m) {
      const complex expect = l == 5 ? g(l, m) / std::sqrt(4 * kPi) : complex(0.0);
      CHECK(std::abs(e.coefficients(l, m) - expect) <= 1e-14);
    }
  const ProductExpansion c = product_expand(one, one);
  CHECK(c.coefficients(0, 0).real() == Approx(1.0 / std::sqrt(4 * kPi)).epsilon(1e-14));
  CHECK(c.norm() == Approx(1.0 / std::sqrt(4 * kPi)).epsilon(1e-14));

  CHECK_THROWS_AS(product_expand(random_band_s2(2, 3, 1), g), std::invalid_argument);
}

TEST_CASE("product_expand: Parseval against quadrature on random pairs") {
  const CoefficientVector f8 = random_harmonic_s2(8, 11);
  const CoefficientVector g8 = random_harmonic_s2(8, 12);
  CHECK(std::abs(product_expand(f8, g8).norm() / product_norm_quadrature(f8, g8) - 1.0) <= 1e-9);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int p = (k * 7) % 25;
    const int q = (k * 11 + 3) % 25;
    const CoefficientVector f = random_harmonic_s2(p, 1000 + k);
    const CoefficientVector g = random_harmonic_s2(q, 2000 + k);
    const ProductExpansion e = product_expand(f, g);
    worst = std::max(worst, std::abs(e.norm() / product_norm_quadrature(f, g) - 1.0));
    // support lies in |p - q| <= L <= p + q
    for (int l = 0; l < std::abs(p - q); ++l)
      for (int m = -l; m <= l; ++m) CHECK(std::abs(e.coefficients(l, m)) == 0.0);
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("best_bilinear_constant: trivial degrees") {
  const BilinearConstant c00 = best_bilinear_constant(0, 0);
  CHECK(c00.value == Approx(1.0 / std::sqrt(4 * kPi)).epsilon(1e-12));
  CHECK(c00.converged);
  for (int l : {1, 4, 9}) {
    const BilinearConstant c = best_bilinear_constant(0, l);
    CHECK(c.value == Approx(1.0 / std::sqrt(4 * kPi)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(best_bilinear_constant(65, 3), std::invalid_argument);
}

TEST_CASE("best_bilinear_constant dominates the highest-weight pair at p = q = 8") {
  const double hw = highest_weight_lp(2, 16, 2.0) / std::pow(highest_weight_lp(2, 8, 2.0), 2);
  const BilinearConstant c = best_bilinear_constant(8, 8);
  CHECK(c.value >= hw * (1 - 1e-12));
  CHECK(c.f.norm() == Approx(1.0).epsilon(1e-12));
  CHECK(c.g.norm() == Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(product_expand(c.f, c.g).norm() - c.value) <= 1e-10);
}

TEST_CASE("best_bilinear_constant: monotone history, starts, warm starts") {
  BilinearOptions opts;
  opts.seed = 5;
  opts.starts = 2;
  const BilinearConstant few = best_bilinear_constant(6, 4, opts);
  for (std::size_t i = 1; i < few.history.size(); ++i) CHECK(few.history[i] >= few.history[i - 1]);
  opts.starts = 6;
  const BilinearConstant more = best_bilinear_constant(6, 4, opts);
  CHECK(more.value >= few.value);

  BilinearOptions warm;
  warm.starts = 1;
  warm.max_iters = 1;
  CoefficientVector f(6), g(4);
  f(6, 6) = 1.0;
  g(4, 4) = 1.0;
  warm.warm_starts.emplace_back(f, g);
  const double supplied = product_expand(f, g).norm();
  CHECK(best_bilinear_constant(6, 4, warm).value >= supplied * (1 - 1e-14));
}

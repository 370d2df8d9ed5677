#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sphlab/harmonics.hpp"
#include "sphlab/quadrature.hpp"

using namespace sphlab;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<SpherePoint> sample_points(int d, int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<SpherePoint> out;
  for (int i = 0; i < count; ++i) {
    std::vector<double> c(static_cast<std::size_t>(d) + 1);
    double n2 = 0.0;
    for (double& v : c) {
      v = normal(rng);
      n2 += v * v;
    }
    for (double& v : c) v /= std::sqrt(n2);
    out.emplace_back(std::move(c));
  }
  return out;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("SpherePoint validation") {
  CHECK_NOTHROW(SpherePoint({0.0, 0.0, 1.0}));
  CHECK_THROWS_AS(SpherePoint({0.0, 0.0, 1.1}), std::invalid_argument);
  CHECK_THROWS_AS(SpherePoint({0.0, 1.0}), std::invalid_argument);
  CHECK(SpherePoint::north_pole(4).dimension() == 4);
}

TEST_CASE("gegenbauer: worked values and domain errors") {
  CHECK(gegenbauer(0, 2.7, -0.3) == 1.0);
  CHECK(gegenbauer(1, 1.0, 0.5) == Approx(1.0).epsilon(1e-15));
  CHECK(gegenbauer(5, 1.5, 1.0) == Approx(21.0).epsilon(1e-13));
  CHECK_THROWS_AS(gegenbauer(3, 1.0, 1.01), std::domain_error);
  CHECK_THROWS_AS(gegenbauer(3, 0.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(gegenbauer(3, -1.0, 0.5), std::domain_error);
  CHECK_NOTHROW(gegenbauer(3, 1.0, 1.0 + 5e-13));
}

TEST_CASE("gegenbauer agrees with the explicit sum") {
  for (double alpha : {0.5, 1.0, 1.5, 2.0, 3.7}) {
    for (int n = 0; n <= 20; ++n) {
      for (double t : {-0.93, -0.41, 0.07, 0.55, 0.98}) {
        const double ref = static_cast<double>(oracle::gegenbauer_explicit(n, alpha, t));
        const double scale = static_cast<double>(oracle::gegenbauer_explicit(n, alpha, 1.0L));
        CHECK(std::abs(gegenbauer(n, alpha, t) - ref) <= 1e-10 * scale);
      }
    }
  }
}

TEST_CASE("gegenbauer at degree 4096 matches Chebyshev U") {
  for (double theta : {0.3001, 1.1003, 2.0007, 2.9001}) {
    const double t = std::cos(theta);
    const double ref = oracle::chebyshev_u(4096, theta);
    if (std::abs(ref) < 1e-2) continue;
    CHECK(rel_err(gegenbauer(4096, 1.0, t), ref) <= 1e-10);
  }
}

TEST_CASE("gegenbauer parity and endpoint identity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
    for (int p : {0, 1, 2, 7, 64, 129, 512}) {
      for (int k = 0; k < 5; ++k) {
        const double t = unif(rng);
        const double a = gegenbauer(p, alpha, t);
        const double b = gegenbauer(p, alpha, -t);
        const double sign = (p % 2 == 0) ? 1.0 : -1.0;
        CHECK(std::abs(b - sign * a) <= 1e-10 * std::max(std::abs(a), 1.0));
      }
    }
  }
  for (double alpha : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
    for (int p = 0; p <= 64; ++p) {
      CHECK(rel_err(gegenbauer(p, alpha, 1.0), oracle::binom_real(p + 2 * alpha - 1, p)) <= 1e-8);
    }
  }
}

TEST_CASE("zonal harmonics: normalization, pole values, parity") {
  const auto pole = SpherePoint::north_pole(2);
  const HarmonicSpec z1(2, 1, Zonal{pole});
  CHECK(zonal_eval(z1, pole) == Approx(std::sqrt(3.0 / (4.0 * kPi))).epsilon(1e-14));
  const auto south = SpherePoint({0.0, 0.0, -1.0});
  for (int p = 0; p <= 9; ++p) {
    const HarmonicSpec z(2, p, Zonal{pole});
    const double sign = p % 2 == 0 ? 1.0 : -1.0;
    CHECK(zonal_eval(z, south) == Approx(sign * zonal_eval(z, pole)).epsilon(1e-12));
  }
  for (auto [d, p] : {std::pair{2, 5}, {3, 4}, {4, 3}, {5, 2}, {3, 11}}) {
    const HarmonicSpec z(d, p, Zonal{SpherePoint::north_pole(d)});
    const SphereRule rule = sphere_rule(d, 2 * p);
    const double norm = lp_norm([&](const SpherePoint& x) { return zonal_eval(z, x); }, rule, 2.0, 2 * p);
    CHECK(std::abs(norm - 1.0) <= 1e-9);
  }
  CHECK_THROWS_AS(zonal_eval(z1, SpherePoint::north_pole(3)), std::invalid_argument);
}

TEST_CASE("zonal profile: two normalization routes agree, no overflow at high degree") {
  for (int d : {2, 3, 4, 5}) {
    const double alpha = 0.5 * (d - 1);
    for (int p : {0, 1, 5, 40, 200}) {
      for (double t : {-0.8, -0.2, 0.35, 0.9, 1.0}) {
        const double a = zonal_profile(d, p, t);
        const double b = zonal_normalizer(d, p) * gegenbauer(p, alpha, t);
        const double scale = zonal_profile(d, p, 1.0);
        CHECK(std::abs(a - b) <= 1e-10 * scale);
      }
    }
  }
  const double high = zonal_profile(5, 3000, 0.999);
  CHECK(std::isfinite(high));
  CHECK(std::isfinite(zonal_profile(5, 3000, 1.0)));
}

TEST_CASE("zonal value depends only on <pole, x>") {
  // frame (pole, e1, e2) on S^2; x(psi) sweeps a circle of constant <pole, x>
  const double pole_c[3] = {0.6, 0.0, 0.8};
  const double e1[3] = {0.8, 0.0, -0.6};
  const double e2[3] = {0.0, 1.0, 0.0};
  const HarmonicSpec z(2, 13, Zonal{SpherePoint({0.6, 0.0, 0.8})});
  for (double t : {-0.7, 0.1, 0.95}) {
    const double s = std::sqrt(1.0 - t * t);
    double first = 0.0;
    for (int k = 0; k < 8; ++k) {
      const double psi = 0.77 * k;
      std::vector<double> c(3);
      for (int i = 0; i < 3; ++i) c[i] = t * pole_c[i] + s * (std::cos(psi) * e1[i] + std::sin(psi) * e2[i]);
      const double v = zonal_eval(z, SpherePoint(c));
      if (k == 0) first = v;
      CHECK(std::abs(v - first) <= 1e-12 * std::max(1.0, std::abs(first)));
    }
  }
}

TEST_CASE("highest weight e_n") {
  const auto pts = sample_points(3, 120, 11);
  for (const auto& x : pts) CHECK(highest_weight_eval(3, 0, x) == complex(1.0));
  for (int n : {0, 1, 5, 300}) CHECK(highest_weight_eval(4, n, SpherePoint({1.0, 0.0, 0.0, 0.0, 0.0})) == complex(1.0));
  for (const auto& x : pts) {
    for (auto [n, m] : {std::pair{3, 4}, {17, 40}, {100, 250}}) {
      const complex lhs = highest_weight_eval(3, n, x) * highest_weight_eval(3, m, x);
      const complex rhs = highest_weight_eval(3, n + m, x);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
    }
  }
}

TEST_CASE("equatorial moment matches the Wallis product on S^2") {
  for (int n = 0; n <= 60; ++n) {
    CHECK(rel_err(equatorial_moment(2, n), static_cast<double>(oracle::wallis_s2(n))) <= 1e-12);
  }
}

TEST_CASE("sph_basis_s2: closed forms and conjugation") {
  const auto pole = SpherePoint::north_pole(2);
  for (const auto& x : sample_points(2, 20, 3)) {
    CHECK(sph_basis_s2(0, 0, x).real() == Approx(0.5 / std::sqrt(kPi)).epsilon(1e-14));
    CHECK(std::abs(sph_basis_s2(0, 0, x).imag()) < 1e-15);
  }
  CHECK(sph_basis_s2(1, 0, pole).real() == Approx(std::sqrt(3.0 / (4.0 * kPi))).epsilon(1e-14));
  // Y_1^1 = -sqrt(3/8pi) sin θ e^{iφ}
  const auto x = SpherePoint::from_angles_s2(0.7, 1.9);
  const complex y11 = -std::sqrt(3.0 / (8.0 * kPi)) * std::sin(0.7) * std::polar(1.0, 1.9);
  CHECK(std::abs(sph_basis_s2(1, 1, x) - y11) < 1e-15);
  for (const auto& p : sample_points(2, 30, 5)) {
    for (int l = 0; l <= 12; ++l) {
      for (int m = 0; m <= l; ++m) {
        const double sign = m % 2 == 0 ? 1.0 : -1.0;
        CHECK(std::abs(std::conj(sph_basis_s2(l, m, p)) - sign * sph_basis_s2(l, -m, p)) < 1e-13);
      }
    }
  }
  CHECK_THROWS_AS(sph_basis_s2(2, 3, pole), std::invalid_argument);
  CHECK_THROWS_AS(sph_basis_s2(1, 0, SpherePoint::north_pole(3)), std::invalid_argument);
}

TEST_CASE("sph_basis_s2 is orthonormal for small l") {
  const SphereRule rule = sphere_rule(2, 8);
  std::vector<std::pair<int, int>> idx;
  for (int l = 0; l <= 4; ++l)
    for (int m = -l; m <= l; ++m) idx.emplace_back(l, m);
  for (auto [l, m] : idx) {
    for (auto [k, n] : idx) {
      complex s = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        s += rule.weights[i] * sph_basis_s2(l, m, rule.nodes[i]) * std::conj(sph_basis_s2(k, n, rule.nodes[i]));
      }
      const double expect = (l == k && m == n) ? 1.0 : 0.0;
      CHECK(std::abs(s - expect) < 1e-12);
    }
  }
}

TEST_CASE("coefficient expansion evaluates as the sum of basis functions") {
  const CoefficientVector f = random_band_s2(0, 9, 42);
  for (const auto& x : sample_points(2, 25, 9)) {
    complex direct = 0.0;
    for (int l = 0; l <= 9; ++l)
      for (int m = -l; m <= l; ++m) direct += f(l, m) * sph_basis_s2(l, m, x);
    CHECK(std::abs(evaluate(f, x) - direct) < 1e-13);
  }
}

TEST_CASE("random_harmonic_s2: unit norm, determinism, support") {
  for (int l : {0, 1, 8, 33}) {
    const auto a = random_harmonic_s2(l, 99);
    CHECK(std::abs(a.norm() - 1.0) <= 1e-14);
    CHECK(a == random_harmonic_s2(l, 99));
    CHECK(a.single_degree() == l);
    CHECK_FALSE(a == random_harmonic_s2(l, 100));
  }
}

TEST_CASE("random_harmonic_s2: E|f(x)|^2 = 1/(4 pi) for unit coefficient norm") {
  // Rotation invariance gives E|f(x)|^2 = ||f||^2 / |S^2|.
  const auto x = SpherePoint::from_angles_s2(1.1, 0.4);
  const int l = 3;
  const int draws = 20000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int s = 0; s < draws; ++s) {
    const double v = std::norm(evaluate(random_harmonic_s2(l, static_cast<std::uint64_t>(s)), x));
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / draws;
  const double se = std::sqrt((sum_sq / draws - mean * mean) / draws);
  CHECK(std::abs(mean - 1.0 / (4.0 * kPi)) <= 3.0 * se);
}

TEST_CASE("unit L2 norms of every family by quadrature") {
  const SpherePoint pole3({0.0, 0.6, 0.0, 0.8});
  const std::vector<HarmonicSpec> specs = {
      HarmonicSpec(2, 7, HighestWeight{}), HarmonicSpec(3, 5, HighestWeight{}), HarmonicSpec(4, 3, HighestWeight{}),
      HarmonicSpec(3, 6, Zonal{pole3}),    HarmonicSpec(2, 6, BasisS2{-4}),     HarmonicSpec(2, 9, RandomS2{17})};
  for (const auto& spec : specs) {
    const SphereRule rule = sphere_rule(spec.dimension(), 2 * spec.degree());
    const double norm = lp_norm([&](const SpherePoint& x) { return evaluate(spec, x); }, rule, 2.0);
    CHECK(std::abs(norm - 1.0) <= 1e-8);
  }
  CHECK_THROWS_AS(HarmonicSpec(3, 2, RandomS2{1}), std::invalid_argument);
  CHECK_THROWS_AS(HarmonicSpec(2, 2, BasisS2{3}), std::invalid_argument);
  CHECK_THROWS_AS(HarmonicSpec(3, 2, Zonal{SpherePoint::north_pole(2)}), std::invalid_argument);
}

TEST_CASE("sqrt_laplace_eigenvalue") {
  CHECK(sqrt_laplace_eigenvalue(2, 0) == 0.0);
  CHECK(sqrt_laplace_eigenvalue(2, 1) == Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(sqrt_laplace_eigenvalue(3, 2) == Approx(std::sqrt(8.0)).epsilon(1e-15));
}

TEST_CASE("windowed projector") {
  const SpectralWindow w(5.0);
  CHECK(w.multiplier(5.0) == 1.0);
  CHECK(w.multiplier(7.0) == Approx(std::exp(-4.0)));
  CHECK_THROWS_AS(SpectralWindow(0.5), std::invalid_argument);

  const auto f = random_harmonic_s2(6, 1);
  const auto out = windowed_projector(w, f);
  const double mult = std::exp(-std::pow(std::sqrt(42.0) - 5.0, 2));
  for (int m = -6; m <= 6; ++m) CHECK(std::abs(out(6, m) - mult * f(6, m)) < 1e-15);

  const SpectralWindow at_eigen(sqrt_laplace_eigenvalue(2, 6));
  CHECK(windowed_projector(at_eigen, f) == f);

  const auto g = random_band_s2(2, 9, 5);
  const auto h = random_band_s2(0, 7, 6);
  const complex a(0.3, -1.2);
  const complex b(2.0, 0.5);
  const auto lhs = windowed_projector(w, a * g + b * h);
  const auto rhs = a * windowed_projector(w, g) + b * windowed_projector(w, h);
  for (std::size_t i = 0; i < lhs.data().size(); ++i) CHECK(std::abs(lhs.data()[i] - rhs.data()[i]) <= 1e-12);
}

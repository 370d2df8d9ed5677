#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace sphlab {

using complex = std::complex<double>;

/// A point on the unit sphere S^d, stored by its d+1 Euclidean coordinates.
///
/// On S^2 the last coordinate is the polar axis, so x = (sin θ cos φ, sin θ sin φ, cos θ).
class SpherePoint {
 public:
  explicit SpherePoint(std::vector<double> coords);

  static SpherePoint from_angles_s2(double theta, double phi);
  static SpherePoint north_pole(int d);

  int dimension() const { return static_cast<int>(coords_.size()) - 1; }
  std::span<const double> coords() const { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

 private:
  std::vector<double> coords_;
};

double dot(const SpherePoint& a, const SpherePoint& b);

struct Zonal {
  SpherePoint pole;
};
struct HighestWeight {};
struct BasisS2 {
  int order = 0;
};
struct RandomS2 {
  std::uint64_t seed = 0;
};
using Family = std::variant<Zonal, HighestWeight, BasisS2, RandomS2>;

/// Short tag used in reports: "zonal", "highest-weight", "basis", "random".
std::string family_tag(const Family& family);

/// One named member of an eigenspace H_p of S^d. Every family is evaluated
/// with unit L^2(S^d) norm.
class HarmonicSpec {
 public:
  HarmonicSpec(int dimension, int degree, Family family);

  int dimension() const { return dimension_; }
  int degree() const { return degree_; }
  const Family& family() const { return family_; }

 private:
  int dimension_;
  int degree_;
  Family family_;
};

/// Truncated expansion over the orthonormal basis Y_l^m of L^2(S^2).
class CoefficientVector {
 public:
  explicit CoefficientVector(int max_degree = 0);

  static std::size_t index(int l, int m) {
    return static_cast<std::size_t>(l * l + l + m);
  }
  static std::size_t size_for(int max_degree) {
    return static_cast<std::size_t>((max_degree + 1) * (max_degree + 1));
  }

  int max_degree() const { return max_degree_; }
  complex& operator()(int l, int m);
  const complex& operator()(int l, int m) const;
  std::span<complex> data() { return entries_; }
  std::span<const complex> data() const { return entries_; }

  /// Euclidean norm of the amplitudes, equal to the L^2(S^2) norm.
  double norm() const;
  /// Lowest and highest degree carrying a nonzero amplitude.
  std::optional<std::pair<int, int>> degree_support() const;
  /// The degree if exactly one block is nonzero (or all zero and max_degree == 0).
  std::optional<int> single_degree() const;
  CoefficientVector truncated(int max_degree) const;

  CoefficientVector& operator*=(complex s);
  CoefficientVector& operator+=(const CoefficientVector& other);
  friend CoefficientVector operator*(complex s, CoefficientVector v) { return v *= s; }
  friend CoefficientVector operator+(CoefficientVector a, const CoefficientVector& b) {
    return a += b;
  }
  bool operator==(const CoefficientVector&) const = default;

 private:
  int max_degree_;
  std::vector<complex> entries_;
};

/// Gaussian window exp(-(s - center)^2) acting on the frequency s = sqrt(l(l+1)).
class SpectralWindow {
 public:
  explicit SpectralWindow(double center);
  double center() const { return center_; }
  double multiplier(double frequency) const;

 private:
  double center_;
};

/// C_p^alpha(t) by the three-term recurrence in p.
double gegenbauer(int p, double alpha, double t);

/// Area of S^d, 2 pi^{(d+1)/2} / Gamma((d+1)/2).
double sphere_area(int d);

/// Unit-norm zonal harmonic of degree p on S^d as a function of t = <pole, x>.
/// Evaluated with the orthonormal (rescaled) Gegenbauer recurrence, so it is
/// safe far above degree 1000.
double zonal_profile(int d, int p, double t);

/// Constant N such that N * C_p^{(d-1)/2}(<pole, x>) has unit L^2(S^d) norm.
double zonal_normalizer(int d, int p);

double zonal_eval(const HarmonicSpec& spec, const SpherePoint& x);

/// (x1 + i x2)^n, not normalized.
complex highest_weight_eval(int d, int n, const SpherePoint& x);

/// Integral over S^d of (x1^2 + x2^2)^a, for real a >= 0.
double equatorial_moment(int d, double a);

/// Orthonormal Y_l^m on S^2, Condon-Shortley phase.
complex sph_basis_s2(int l, int m, const SpherePoint& x);

/// A unit-norm element of H_l on S^2 drawn from the rotation-invariant
/// (complex Gaussian) distribution; a pure function of (l, seed).
CoefficientVector random_harmonic_s2(int l, std::uint64_t seed);

/// Independent complex Gaussian amplitudes on every (l, m) with l in
/// [l_min, l_max], normalized to unit norm. Same stream as random_harmonic_s2.
CoefficientVector random_band_s2(int l_min, int l_max, std::uint64_t seed);

double sqrt_laplace_eigenvalue(int d, int p);

CoefficientVector windowed_projector(const SpectralWindow& w, const CoefficientVector& f);

/// Pointwise value of a unit-normalized family member.
complex evaluate(const HarmonicSpec& spec, const SpherePoint& x);

/// Pointwise value of an expansion on S^2.
complex evaluate(const CoefficientVector& f, const SpherePoint& x);

/// Normalized associated Legendre values P̄_l^m(t) for fixed m >= 0 and
/// l = m..l_max, including the Condon-Shortley phase and the 1/sqrt(4 pi)
/// factor, so that Y_l^m = P̄_l^m(cos θ) e^{i m φ}. out.size() must be
/// l_max - m + 1. sin_theta is passed separately for accuracy near the poles.
void normalized_legendre_column(int m, int l_max, double t, double sin_theta,
                                std::span<double> out);

}  // namespace sphlab

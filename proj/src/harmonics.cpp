#include "sphlab/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "sphlab/detail/orthopoly.hpp"
#include "sphlab/random_stream.hpp"

namespace sphlab {

namespace {

constexpr double kUnitSlack = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double clamp_cosine(double t) { return std::clamp(t, -1.0, 1.0); }

void require_s2(const SpherePoint& x, const char* what) {
  if (x.dimension() != 2) {
    throw std::invalid_argument(std::string(what) + ": point must lie on S^2");
  }
}

}  // namespace

SpherePoint::SpherePoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 3) {
    throw std::invalid_argument("SpherePoint: dimension d >= 2 required");
  }
  double sq = 0.0;
  for (double c : coords_) {
    if (!std::isfinite(c)) throw std::invalid_argument("SpherePoint: non-finite coordinate");
    sq += c * c;
  }
  if (std::abs(std::sqrt(sq) - 1.0) > kUnitSlack) {
    throw std::invalid_argument("SpherePoint: coordinates are not unit length");
  }
}

SpherePoint SpherePoint::from_angles_s2(double theta, double phi) {
  const double s = std::sin(theta);
  return SpherePoint({s * std::cos(phi), s * std::sin(phi), std::cos(theta)});
}

SpherePoint SpherePoint::north_pole(int d) {
  if (d < 2) throw std::invalid_argument("north_pole: d >= 2 required");
  std::vector<double> c(static_cast<std::size_t>(d) + 1, 0.0);
  c.back() = 1.0;
  return SpherePoint(std::move(c));
}

double dot(const SpherePoint& a, const SpherePoint& b) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.coords().size(); ++i) s += a[i] * b[i];
  return s;
}

std::string family_tag(const Family& family) {
  return std::visit(overloaded{[](const Zonal&) { return std::string("zonal"); },
                               [](const HighestWeight&) { return std::string("highest-weight"); },
                               [](const BasisS2&) { return std::string("basis"); },
                               [](const RandomS2&) { return std::string("random"); }},
                    family);
}

HarmonicSpec::HarmonicSpec(int dimension, int degree, Family family)
    : dimension_(dimension), degree_(degree), family_(std::move(family)) {
  if (dimension_ < 2) throw std::invalid_argument("HarmonicSpec: dimension >= 2 required");
  if (degree_ < 0) throw std::invalid_argument("HarmonicSpec: degree >= 0 required");
  std::visit(overloaded{[&](const Zonal& z) {
                          if (z.pole.dimension() != dimension_) {
                            throw std::invalid_argument("HarmonicSpec: zonal pole dimension mismatch");
                          }
                        },
                        [](const HighestWeight&) {},
                        [&](const BasisS2& b) {
                          if (dimension_ != 2) throw std::invalid_argument("HarmonicSpec: BasisS2 requires d = 2");
                          if (std::abs(b.order) > degree_) {
                            throw std::invalid_argument("HarmonicSpec: |m| <= degree required");
                          }
                        },
                        [&](const RandomS2&) {
                          if (dimension_ != 2) throw std::invalid_argument("HarmonicSpec: RandomS2 requires d = 2");
                        }},
             family_);
}

// ---- CoefficientVector ------------------------------------------------------

CoefficientVector::CoefficientVector(int max_degree)
    : max_degree_(max_degree), entries_(size_for(max_degree)) {
  if (max_degree < 0) throw std::invalid_argument("CoefficientVector: max_degree >= 0 required");
}

complex& CoefficientVector::operator()(int l, int m) {
  if (l < 0 || l > max_degree_ || std::abs(m) > l) throw std::out_of_range("CoefficientVector: (l, m) out of range");
  return entries_[index(l, m)];
}

const complex& CoefficientVector::operator()(int l, int m) const {
  if (l < 0 || l > max_degree_ || std::abs(m) > l) throw std::out_of_range("CoefficientVector: (l, m) out of range");
  return entries_[index(l, m)];
}

double CoefficientVector::norm() const {
  double s = 0.0;
  for (const auto& a : entries_) s += std::norm(a);
  return std::sqrt(s);
}

std::optional<std::pair<int, int>> CoefficientVector::degree_support() const {
  int lo = -1;
  int hi = -1;
  for (int l = 0; l <= max_degree_; ++l) {
    for (int m = -l; m <= l; ++m) {
      if (entries_[index(l, m)] != complex{}) {
        if (lo < 0) lo = l;
        hi = l;
        break;
      }
    }
  }
  if (lo < 0) return std::nullopt;
  return std::make_pair(lo, hi);
}

std::optional<int> CoefficientVector::single_degree() const {
  const auto support = degree_support();
  if (!support || support->first != support->second) return std::nullopt;
  return support->first;
}

CoefficientVector CoefficientVector::truncated(int max_degree) const {
  CoefficientVector out(max_degree);
  const int common = std::min(max_degree, max_degree_);
  std::copy_n(entries_.begin(), size_for(common), out.entries_.begin());
  return out;
}

CoefficientVector& CoefficientVector::operator*=(complex s) {
  for (auto& a : entries_) a *= s;
  return *this;
}

CoefficientVector& CoefficientVector::operator+=(const CoefficientVector& other) {
  if (other.max_degree_ > max_degree_) *this = truncated(other.max_degree_);
  for (std::size_t i = 0; i < other.entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

// ---- windows and spectra ----------------------------------------------------

SpectralWindow::SpectralWindow(double center) : center_(center) {
  if (!(center >= 1.0)) throw std::invalid_argument("SpectralWindow: center >= 1 required");
}

double SpectralWindow::multiplier(double frequency) const {
  const double s = frequency - center_;
  return std::exp(-s * s);
}

double sqrt_laplace_eigenvalue(int d, int p) {
  if (d < 2 || p < 0) throw std::invalid_argument("sqrt_laplace_eigenvalue: d >= 2, p >= 0 required");
  return std::sqrt(static_cast<double>(p) * static_cast<double>(p + d - 1));
}

CoefficientVector windowed_projector(const SpectralWindow& w, const CoefficientVector& f) {
  CoefficientVector out = f;
  auto data = out.data();
  for (int l = 0; l <= f.max_degree(); ++l) {
    const double mult = w.multiplier(sqrt_laplace_eigenvalue(2, l));
    for (int m = -l; m <= l; ++m) data[CoefficientVector::index(l, m)] *= mult;
  }
  return out;
}

// ---- Gegenbauer and zonal ---------------------------------------------------

double gegenbauer(int p, double alpha, double t) {
  if (p < 0) throw std::domain_error("gegenbauer: p >= 0 required");
  if (!(alpha > 0.0)) throw std::domain_error("gegenbauer: alpha > 0 required");
  if (!(std::abs(t) <= 1.0 + kUnitSlack)) throw std::domain_error("gegenbauer: t outside [-1, 1]");
  t = clamp_cosine(t);
  if (p == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * alpha * t;
  for (int n = 2; n <= p; ++n) {
    const double next = (2.0 * (n + alpha - 1.0) * t * cur - (n + 2.0 * alpha - 2.0) * prev) / n;
    prev = cur;
    cur = next;
  }
  return cur;
}

double sphere_area(int d) {
  if (d < 1) throw std::invalid_argument("sphere_area: d >= 1 required");
  const double h = 0.5 * (d + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

double zonal_profile(int d, int p, double t) {
  if (d < 2 || p < 0) throw std::invalid_argument("zonal_profile: d >= 2, p >= 0 required");
  const double alpha = 0.5 * (d - 1);
  return detail::ortho_eval(p, alpha, clamp_cosine(t)) / std::sqrt(sphere_area(d - 1));
}

double zonal_normalizer(int d, int p) {
  if (d < 2 || p < 0) throw std::invalid_argument("zonal_normalizer: d >= 2, p >= 0 required");
  const double alpha = 0.5 * (d - 1);
  // ||C_p^alpha||^2 in L^2((1 - t^2)^{alpha - 1/2} dt)
  const double log_h = std::log(std::numbers::pi) + (1.0 - 2.0 * alpha) * std::log(2.0) +
                       std::lgamma(p + 2.0 * alpha) - std::lgamma(p + 1.0) - std::log(p + alpha) -
                       2.0 * std::lgamma(alpha);
  return 1.0 / std::sqrt(sphere_area(d - 1) * std::exp(log_h));
}

double zonal_eval(const HarmonicSpec& spec, const SpherePoint& x) {
  const auto* z = std::get_if<Zonal>(&spec.family());
  if (z == nullptr) throw std::invalid_argument("zonal_eval: spec is not zonal");
  if (x.dimension() != spec.dimension()) throw std::invalid_argument("zonal_eval: dimension mismatch");
  return zonal_profile(spec.dimension(), spec.degree(), dot(z->pole, x));
}

// ---- highest weight ---------------------------------------------------------

complex highest_weight_eval(int /*d*/, int n, const SpherePoint& x) {
  if (n < 0) throw std::invalid_argument("highest_weight_eval: n >= 0 required");
  if (n == 0) return 1.0;
  const double r = std::hypot(x[0], x[1]);
  if (r == 0.0) return 0.0;
  const double phi = std::atan2(x[1], x[0]);
  return std::polar(std::pow(r, n), n * phi);
}

double equatorial_moment(int d, double a) {
  if (d < 2 || !(a >= 0.0)) throw std::invalid_argument("equatorial_moment: d >= 2, a >= 0 required");
  // x1^2 + x2^2 is Beta(1, (d-1)/2) distributed under normalized surface measure.
  const double beta = 0.5 * (d - 1);
  return sphere_area(d) *
         std::exp(std::lgamma(1.0 + a) + std::lgamma(beta + 1.0) - std::lgamma(1.0 + a + beta));
}

// ---- S^2 basis --------------------------------------------------------------

void normalized_legendre_column(int m, int l_max, double t, double sin_theta, std::span<double> out) {
  double pmm = 0.5 / std::sqrt(std::numbers::pi);
  for (int k = 1; k <= m; ++k) pmm *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * sin_theta;
  out[0] = pmm;
  if (l_max == m) return;
  out[1] = std::sqrt(2.0 * m + 3.0) * t * pmm;
  const double m2 = static_cast<double>(m) * m;
  for (int l = m + 2; l <= l_max; ++l) {
    const double l2 = static_cast<double>(l) * l;
    const double lm1 = static_cast<double>(l - 1) * (l - 1);
    const double a = std::sqrt((4.0 * l2 - 1.0) / (l2 - m2));
    const double b = std::sqrt((lm1 - m2) / (4.0 * lm1 - 1.0));
    out[l - m] = a * (t * out[l - m - 1] - b * out[l - m - 2]);
  }
}

complex sph_basis_s2(int l, int m, const SpherePoint& x) {
  if (l < 0 || std::abs(m) > l) throw std::invalid_argument("sph_basis_s2: |m| <= l required");
  require_s2(x, "sph_basis_s2");
  const int am = std::abs(m);
  std::vector<double> column(static_cast<std::size_t>(l - am + 1));
  normalized_legendre_column(am, l, x[2], std::hypot(x[0], x[1]), column);
  const double phi = std::atan2(x[1], x[0]);
  const complex y = std::polar(column.back(), am * phi);
  if (m >= 0) return y;
  return (am % 2 == 0 ? 1.0 : -1.0) * std::conj(y);
}

complex evaluate(const CoefficientVector& f, const SpherePoint& x) {
  require_s2(x, "evaluate");
  const int lmax = f.max_degree();
  const double t = x[2];
  const double s = std::hypot(x[0], x[1]);
  const double phi = std::atan2(x[1], x[0]);
  std::vector<double> column(static_cast<std::size_t>(lmax) + 1);
  complex total = 0.0;
  for (int m = 0; m <= lmax; ++m) {
    std::span<double> col(column.data(), static_cast<std::size_t>(lmax - m + 1));
    normalized_legendre_column(m, lmax, t, s, col);
    complex pos = 0.0;
    complex neg = 0.0;
    for (int l = m; l <= lmax; ++l) {
      pos += f(l, m) * col[l - m];
      if (m > 0) neg += f(l, -m) * col[l - m];
    }
    const complex e = std::polar(1.0, m * phi);
    total += pos * e;
    if (m > 0) total += (m % 2 == 0 ? 1.0 : -1.0) * neg * std::conj(e);
  }
  return total;
}

// ---- random elements --------------------------------------------------------

namespace {

complex gaussian_entry(std::uint64_t seed, int l, int m) {
  const auto entry = static_cast<std::uint64_t>(m + l);
  const double re = standard_normal(stream_key(seed, static_cast<std::uint64_t>(l), 2 * entry));
  const double im = standard_normal(stream_key(seed, static_cast<std::uint64_t>(l), 2 * entry + 1));
  return {re, im};
}

}  // namespace

CoefficientVector random_harmonic_s2(int l, std::uint64_t seed) {
  return random_band_s2(l, l, seed);
}

CoefficientVector random_band_s2(int l_min, int l_max, std::uint64_t seed) {
  if (l_min < 0 || l_max < l_min) throw std::invalid_argument("random_band_s2: 0 <= l_min <= l_max required");
  CoefficientVector f(l_max);
  for (int l = l_min; l <= l_max; ++l) {
    for (int m = -l; m <= l; ++m) f(l, m) = gaussian_entry(seed, l, m);
  }
  f *= 1.0 / f.norm();
  return f;
}

complex evaluate(const HarmonicSpec& spec, const SpherePoint& x) {
  if (x.dimension() != spec.dimension()) throw std::invalid_argument("evaluate: dimension mismatch");
  const int d = spec.dimension();
  const int p = spec.degree();
  return std::visit(
      overloaded{[&](const Zonal&) -> complex { return zonal_eval(spec, x); },
                 [&](const HighestWeight&) -> complex {
                   return highest_weight_eval(d, p, x) / std::sqrt(equatorial_moment(d, p));
                 },
                 [&](const BasisS2& b) -> complex { return sph_basis_s2(p, b.order, x); },
                 [&](const RandomS2& r) -> complex { return evaluate(random_harmonic_s2(p, r.seed), x); }},
      spec.family());
}

}  // namespace sphlab

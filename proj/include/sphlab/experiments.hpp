#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sphlab/harmonics.hpp"

namespace sphlab {

/// A grid needs more quadrature nodes (or a higher truncation degree) than allowed.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Growth factor of the bilinear estimate: nu^{1/4} (d = 2),
/// nu^{1/2} log^{1/2} nu (d = 3, log guarded below by 1), nu^{(d-2)/2} (d >= 4).
double lambda_bound(int d, double nu);

/// (l1 l2 l3 / max(l1, l2, l3))^{(2d - 3)/4}.
double trilinear_bound(int d, double l1, double l2, double l3);

struct RatioSample {
  int dimension = 2;
  std::vector<std::string> families;  // one tag per factor
  std::vector<double> degrees;        // eigenspace degrees, or window centers
  double lebesgue_r = 2.0;
  double ratio = 0.0;  // ||prod factors||_{L^r} with unit-L^2 factors
  double bound = 1.0;
  int quadrature_degree = -1;  // exactness of the rule used, -1 for closed forms
  int integrand_degree = -1;   // degree of |product|^r when r is a finite even integer
  int draw = 0;

  double ratio_over_bound() const { return ratio / bound; }
  double min_degree() const;
  double max_degree() const;
  bool operator==(const RatioSample&) const = default;
};

struct ExperimentGrid {
  std::vector<RatioSample> samples;
  std::uint64_t seed = 0;
  int quadrature_exactness = -1;  // highest rule exactness used by any sample
  std::string timestamp;

  bool operator==(const ExperimentGrid&) const = default;
};

/// Sorts samples by (degrees, families, r, draw) and refreshes quadrature_exactness.
void canonicalize(ExperimentGrid& grid);

struct FitResult {
  double exponent = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double residual_max = 0.0;
  std::optional<double> loglog_coefficient;

  bool operator==(const FitResult&) const = default;
};

/// Least squares on log value = exponent log nu + intercept (+ gamma log log nu).
FitResult fit_exponent(std::span<const std::pair<double, double>> samples, bool with_loglog = false);

enum class Abscissa { min_degree, max_degree, first_degree, second_degree };

std::vector<std::pair<double, double>> abscissa_ratio_pairs(const ExperimentGrid& grid, Abscissa x);

struct GridOptions {
  int quadrature_margin = 2;
  std::size_t node_budget = 20'000'000;
  /// Skip closed forms and the zonal line reduction; always integrate on S^d.
  bool force_quadrature = false;
  std::uint64_t seed = 0;
};

using DegreePair = std::array<int, 2>;
using DegreeTriple = std::array<int, 3>;

/// One bilinear sample per pair, bound = lambda_bound(d, max(1, min(p, q))).
ExperimentGrid ratio_grid(int d, const Family& family_f, const Family& family_g,
                          std::span<const DegreePair> degree_pairs, double lebesgue_r,
                          const GridOptions& opts = {});

/// One trilinear sample per triple, bound = trilinear_bound.
ExperimentGrid trilinear_ratio_grid(int d, const std::array<Family, 3>& families,
                                    std::span<const DegreeTriple> degree_triples, double lebesgue_r = 2.0,
                                    const GridOptions& opts = {});

/// ||e_{n+m}||_{L^r} / (||e_n||_2 ||e_m||_2) on S^2 for each (m, r).
ExperimentGrid critical_p_scan(int n_fixed, std::span<const int> m_values, std::span<const double> r_values);

struct WindowOptions {
  double half_width = 3.0;  // degrees with |sqrt(l(l+1)) - center| <= half_width are drawn
  int max_degree_budget = 256;
  int quadrature_margin = 2;
};

/// Degrees [l_lo, l_hi] drawn for a window center.
std::pair<int, int> window_band(double center, double half_width);

/// ||(chi_lambda f)(chi_mu g)||_{L^2(S^2)} / (||f||_2 ||g||_2) by exact quadrature.
double windowed_ratio(double lambda, double mu, const CoefficientVector& f, const CoefficientVector& g,
                      int quadrature_margin = 2);

/// Random draws across each window's band, bound = lambda_bound(2, min(lambda, mu)).
ExperimentGrid windowed_band_experiment(double lambda, double mu, int n_draws, std::uint64_t seed,
                                        const WindowOptions& opts = {});

/// max over samples of ratio / bound.
double empirical_constant(const ExperimentGrid& grid);

/// max ratio / bound over samples whose abscissa lies in [lo, hi]; nullopt if none.
std::optional<double> empirical_constant_in(const ExperimentGrid& grid, Abscissa x, double lo, double hi);

}  // namespace sphlab

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "sphlab/harmonics.hpp"

namespace sphlab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct LineRule {
  std::vector<double> nodes;    // ascending, in (-1, 1)
  std::vector<double> weights;  // positive
  int exact_degree = 0;
};

/// n-point Gauss-Legendre rule, exact for degree 2n - 1.
LineRule gauss_legendre(int n);

/// n-point Gauss rule for the weight (1 - t^2)^beta, beta > -1.
/// beta = 0 is Gauss-Legendre; beta = (k - 2) / 2 is the polar weight of S^k.
LineRule gauss_gegenbauer(int n, double beta);

/// Product rule on S^d: Gauss rules in each polar cosine and equispaced
/// azimuth. On S^2 nodes are ring-major: node (i, j) has cos θ = polar[i]
/// and φ = 2π j / azimuths.
struct SphereRule {
  int dimension = 2;
  std::vector<SpherePoint> nodes;
  std::vector<double> weights;
  int exact_degree = 0;
  int polar_count = 0;  // Gauss nodes per polar axis
  int azimuths = 0;     // equispaced points on the innermost circle
};

SphereRule sphere_rule(int d, int target_degree);

/// Node count sphere_rule(d, target_degree) would produce, without building it.
std::size_t sphere_rule_size(int d, int target_degree);

/// Polar Gauss nodes per axis and azimuth count used for a target degree.
int polar_nodes_for(int target_degree);
int azimuths_for(int target_degree);

/// Neumaier-compensated sum in the given order.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// (sum_i w_i |v_i|^r)^{1/r} for values v_i at the rule's nodes; max_i |v_i| for r = infinity.
double lp_norm_values(std::span<const complex> values, const SphereRule& rule, double r);
double lp_norm_values(std::span<const double> values, const SphereRule& rule, double r);

/// L^r(S^d) norm of a pointwise-evaluable f by the rule. When integrand_degree
/// is given (the polynomial degree of |f|^r) the rule must be exact for it.
/// For r = infinity the result is the empirical sup over the nodes.
template <class F>
double lp_norm(F&& f, const SphereRule& rule, double r, int integrand_degree = -1) {
  if (!(r >= 1.0)) throw std::invalid_argument("lp_norm: r >= 1 required");
  if (std::isfinite(r) && integrand_degree > rule.exact_degree) {
    throw std::invalid_argument("lp_norm: rule is not exact for the integrand degree");
  }
  using Result = std::decay_t<decltype(f(rule.nodes.front()))>;
  std::vector<Result> values;
  values.reserve(rule.nodes.size());
  for (const auto& x : rule.nodes) values.push_back(f(x));
  return lp_norm_values(std::span<const Result>(values), rule, r);
}

/// Rule for the empirical L^infinity norm of a function of the given
/// oscillation degree: ten times the degree per axis.
SphereRule dense_sup_rule(int d, int oscillation_degree);

/// L^r(S^d) norm of a product of co-axial unit zonal harmonics, reduced to
/// an exact one-dimensional Gauss rule in t = <pole, x>. r must be even.
double zonal_line_norm(int d, std::span<const int> degrees, int r);

/// ||(x1 + i x2)^n||_{L^r(S^d)} in closed form.
double highest_weight_lp(int d, int n, double r);

}  // namespace sphlab

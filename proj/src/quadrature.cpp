#include "sphlab/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sphlab/detail/orthopoly.hpp"

namespace sphlab {

namespace {

constexpr double kNewtonTol = 1e-15;
constexpr int kNewtonMaxIter = 100;

struct PolyValue {
  double value;
  double derivative;
  double christoffel;  // sum_{k < n} q_k(t)^2
};

PolyValue ortho_with_derivative(int n, double alpha, double t) {
  double q_prev = 0.0;
  double q = 1.0 / std::sqrt(detail::ortho_mass(alpha));
  double dq_prev = 0.0;
  double dq = 0.0;
  double a_prev = 0.0;
  double christoffel = 0.0;
  for (int k = 0; k < n; ++k) {
    christoffel += q * q;
    const double a_next = detail::ortho_offdiag(k + 1, alpha);
    const double q_next = (t * q - a_prev * q_prev) / a_next;
    const double dq_next = (q + t * dq - a_prev * dq_prev) / a_next;
    q_prev = q;
    q = q_next;
    dq_prev = dq;
    dq = dq_next;
    a_prev = a_next;
  }
  return {q, dq, christoffel};
}

}  // namespace

LineRule gauss_gegenbauer(int n, double beta) {
  if (n < 1) throw std::invalid_argument("gauss rule: n >= 1 required");
  if (!(beta > -1.0)) throw std::invalid_argument("gauss rule: beta > -1 required");
  const double alpha = beta + 0.5;
  LineRule rule;
  rule.exact_degree = 2 * n - 1;
  if (n == 1) {
    rule.nodes = {0.0};
    rule.weights = {detail::ortho_mass(alpha)};
    return rule;
  }

  // Jacobi-matrix eigenvalues as starting points, polished by Newton on q_n.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for (int k = 1; k < n; ++k) sub(k - 1) = detail::ortho_offdiag(k, alpha);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);

  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double t = solver.eigenvalues()(i);
    for (int iter = 0; iter < kNewtonMaxIter; ++iter) {
      const auto pv = ortho_with_derivative(n, alpha, t);
      const double step = pv.value / pv.derivative;
      t -= step;
      if (std::abs(step) < kNewtonTol) break;
    }
    rule.nodes[i] = t;
    rule.weights[i] = 1.0 / ortho_with_derivative(n, alpha, t).christoffel;
  }

  // The weight is even: enforce exact node and weight symmetry.
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

LineRule gauss_legendre(int n) { return gauss_gegenbauer(n, 0.0); }

int polar_nodes_for(int target_degree) { return (target_degree + 3) / 2 + 2; }

int azimuths_for(int target_degree) { return target_degree + 2; }

std::size_t sphere_rule_size(int d, int target_degree) {
  const auto n = static_cast<std::size_t>(polar_nodes_for(target_degree));
  std::size_t size = static_cast<std::size_t>(azimuths_for(target_degree));
  for (int k = 2; k <= d; ++k) size *= n;
  return size;
}

SphereRule sphere_rule(int d, int target_degree) {
  if (d < 2 || d > 5) throw std::invalid_argument("sphere_rule: unsupported dimension (d in {2,...,5})");
  if (target_degree < 0) throw std::invalid_argument("sphere_rule: target_degree >= 0 required");
  const int n = polar_nodes_for(target_degree);
  const int azimuths = azimuths_for(target_degree);

  // Level 1: equispaced circle. Coordinates are stored flat, k + 1 per point.
  std::vector<double> coords;
  std::vector<double> weights;
  coords.reserve(2 * static_cast<std::size_t>(azimuths));
  for (int j = 0; j < azimuths; ++j) {
    const double phi = 2.0 * std::numbers::pi * j / azimuths;
    coords.push_back(std::cos(phi));
    coords.push_back(std::sin(phi));
    weights.push_back(2.0 * std::numbers::pi / azimuths);
  }

  for (int k = 2; k <= d; ++k) {
    const LineRule polar = gauss_gegenbauer(n, 0.5 * (k - 2));
    const std::size_t inner = weights.size();
    const std::size_t stride = static_cast<std::size_t>(k);  // coordinates per point at level k-1
    std::vector<double> next_coords;
    std::vector<double> next_weights;
    next_coords.reserve(inner * polar.nodes.size() * (stride + 1));
    next_weights.reserve(inner * polar.nodes.size());
    for (std::size_t i = 0; i < polar.nodes.size(); ++i) {
      const double t = polar.nodes[i];
      const double s = std::sqrt((1.0 - t) * (1.0 + t));
      for (std::size_t p = 0; p < inner; ++p) {
        for (std::size_t c = 0; c < stride; ++c) next_coords.push_back(s * coords[p * stride + c]);
        next_coords.push_back(t);
        next_weights.push_back(polar.weights[i] * weights[p]);
      }
    }
    coords = std::move(next_coords);
    weights = std::move(next_weights);
  }

  SphereRule rule;
  rule.dimension = d;
  rule.exact_degree = std::min(2 * n - 1, azimuths - 1);
  rule.polar_count = n;
  rule.azimuths = azimuths;
  rule.weights = std::move(weights);
  rule.nodes.reserve(rule.weights.size());
  const auto stride = static_cast<std::size_t>(d + 1);
  for (std::size_t p = 0; p < rule.weights.size(); ++p) {
    rule.nodes.emplace_back(std::vector<double>(coords.begin() + static_cast<std::ptrdiff_t>(p * stride),
                                                coords.begin() + static_cast<std::ptrdiff_t>((p + 1) * stride)));
  }
  return rule;
}

SphereRule dense_sup_rule(int d, int oscillation_degree) {
  return sphere_rule(d, 20 * std::max(oscillation_degree, 1));
}

namespace {

template <class T>
double lp_norm_impl(std::span<const T> values, const SphereRule& rule, double r) {
  if (!(r >= 1.0)) throw std::invalid_argument("lp_norm: r >= 1 required");
  if (values.size() != rule.weights.size()) throw std::invalid_argument("lp_norm: value count != node count");
  if (std::isinf(r)) {
    double sup = 0.0;
    for (const auto& v : values) sup = std::max(sup, std::abs(v));
    return sup;
  }
  CompensatedSum sum;
  if (r == 2.0) {
    for (std::size_t i = 0; i < values.size(); ++i) sum.add(rule.weights[i] * std::norm(values[i]));
    return std::sqrt(sum.value());
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum.add(rule.weights[i] * std::pow(std::abs(values[i]), r));
  }
  return std::pow(sum.value(), 1.0 / r);
}

}  // namespace

double lp_norm_values(std::span<const complex> values, const SphereRule& rule, double r) {
  return lp_norm_impl(values, rule, r);
}

double lp_norm_values(std::span<const double> values, const SphereRule& rule, double r) {
  return lp_norm_impl(values, rule, r);
}

double zonal_line_norm(int d, std::span<const int> degrees, int r) {
  if (r < 2 || r % 2 != 0) throw std::invalid_argument("zonal_line_norm: r must be a positive even integer");
  if (d < 2) throw std::invalid_argument("zonal_line_norm: d >= 2 required");
  if (degrees.empty()) throw std::invalid_argument("zonal_line_norm: at least one factor required");
  int total = 0;
  for (int p : degrees) {
    if (p < 0) throw std::invalid_argument("zonal_line_norm: degrees must be >= 0");
    total += p;
  }
  const int integrand_degree = r * total;
  const LineRule rule = gauss_gegenbauer(integrand_degree / 2 + 3, 0.5 * (d - 2));
  CompensatedSum sum;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    double product = 1.0;
    for (int p : degrees) product *= zonal_profile(d, p, rule.nodes[i]);
    sum.add(rule.weights[i] * std::pow(product * product, r / 2));
  }
  return std::pow(sphere_area(d - 1) * sum.value(), 1.0 / r);
}

double highest_weight_lp(int d, int n, double r) {
  if (n < 0) throw std::invalid_argument("highest_weight_lp: n >= 0 required");
  if (!(r >= 1.0)) throw std::invalid_argument("highest_weight_lp: r >= 1 required");
  if (std::isinf(r)) return 1.0;
  return std::pow(equatorial_moment(d, 0.5 * n * r), 1.0 / r);
}

}  // namespace sphlab

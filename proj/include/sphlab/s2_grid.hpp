#pragma once

#include <memory>
#include <span>
#include <vector>

#include "sphlab/harmonics.hpp"
#include "sphlab/quadrature.hpp"

namespace sphlab {

/// Fast evaluation of S^2 expansions on the nodes of a product rule, and the
/// adjoint (projection of sampled values onto Y_l^m). Associated Legendre
/// values for every ring are tabulated once at construction; the azimuthal
/// sums on each ring are FFTs.
class S2Grid {
 public:
  /// max_degree bounds the expansions handled; exact_degree sizes the rule.
  S2Grid(int max_degree, int exact_degree);

  const SphereRule& rule() const { return rule_; }
  int max_degree() const { return max_degree_; }
  std::size_t size() const { return rule_.weights.size(); }

  std::vector<complex> synthesize(const CoefficientVector& f) const;
  void synthesize(const CoefficientVector& f, std::span<complex> out) const;

  /// a_{l,m} = sum_i w_i conj(Y_l^m(x_i)) v_i for l_min <= l <= l_max.
  /// Equals the L^2 projection when the rule integrates conj(Y) v exactly.
  CoefficientVector analyze(std::span<const complex> values, int l_max, int l_min = 0) const;

 private:
  std::size_t column_offset(int m) const;
  double legendre(std::size_t ring, int l, int m) const {
    return legendre_[ring * table_stride_ + column_offset(m) + static_cast<std::size_t>(l - m)];
  }

  SphereRule rule_;
  int max_degree_;
  std::size_t table_stride_;
  std::vector<double> legendre_;  // per ring: m-major columns P̄_l^m, l = m..max_degree
  struct RingFft;
  std::shared_ptr<const RingFft> fft_;
};

}  // namespace sphlab

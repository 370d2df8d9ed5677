#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sphlab/experiments.hpp"

namespace sphlab {

FitResult fit_exponent(std::span<const std::pair<double, double>> samples, bool with_loglog) {
  if (samples.size() < 3) throw std::invalid_argument("fit_exponent: at least 3 samples required");
  for (const auto& [nu, value] : samples) {
    if (!(nu > 0.0) || !(value > 0.0)) throw std::invalid_argument("fit_exponent: non-positive sample");
    if (with_loglog && !(nu > 1.0)) throw std::invalid_argument("fit_exponent: log log needs nu > 1");
  }
  const auto n = static_cast<Eigen::Index>(samples.size());
  const Eigen::Index cols = with_loglog ? 3 : 2;
  Eigen::MatrixXd design(n, cols);
  Eigen::VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double log_nu = std::log(samples[static_cast<std::size_t>(i)].first);
    design(i, 0) = log_nu;
    design(i, 1) = 1.0;
    if (with_loglog) design(i, 2) = std::log(log_nu);
    target(i) = std::log(samples[static_cast<std::size_t>(i)].second);
  }
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(target);
  const Eigen::VectorXd residual = target - design * coef;

  FitResult fit;
  fit.exponent = coef(0);
  fit.intercept = coef(1);
  if (with_loglog) fit.loglog_coefficient = coef(2);
  fit.residual_max = residual.cwiseAbs().maxCoeff();
  const double ss_res = residual.squaredNorm();
  const double ss_tot = (target.array() - target.mean()).matrix().squaredNorm();
  fit.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
  return fit;
}

}  // namespace sphlab

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sphlab/coupling.hpp"
#include "sphlab/random_stream.hpp"
#include "sphlab/s2_grid.hpp"

namespace sphlab {

namespace {

constexpr int kMaxDegree = 64;
constexpr int kInnerCap = 60;

double inner(const CoefficientVector& a, const CoefficientVector& b) {
  complex s = 0.0;
  const auto x = a.data();
  const auto y = b.data();
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s.real();
}

/// One factor of the alternating scheme: the PSD operator
/// x -> P_deg(weight * x) on H_deg, with weight = |other factor|^2 on the grid.
class WeightedProjection {
 public:
  WeightedProjection(const S2Grid& grid, int degree) : grid_(grid), degree_(degree), buffer_(grid.size()) {}

  void set_weight(const std::vector<complex>& other_values) {
    weight_.resize(other_values.size());
    for (std::size_t i = 0; i < other_values.size(); ++i) weight_[i] = std::norm(other_values[i]);
  }

  CoefficientVector apply(const CoefficientVector& x) {
    grid_.synthesize(x, buffer_);
    for (std::size_t i = 0; i < buffer_.size(); ++i) buffer_[i] *= weight_[i];
    return grid_.analyze(buffer_, degree_, degree_);
  }

 private:
  const S2Grid& grid_;
  int degree_;
  std::vector<double> weight_;
  std::vector<complex> buffer_;
};

struct StartResult {
  double value = 0.0;
  CoefficientVector f;
  CoefficientVector g;
  bool converged = false;
  int iterations = 0;
  std::vector<double> history;
};

/// Power iteration from x; returns the best Rayleigh quotient seen and leaves
/// the corresponding unit vector in x. Never returns below the starting value.
double power_ascent(WeightedProjection& op, CoefficientVector& x, double tol, int& budget) {
  CoefficientVector y = op.apply(x);
  double rho = inner(x, y);
  for (int step = 0; step < kInnerCap && budget > 0; ++step) {
    --budget;
    const double ny = y.norm();
    if (ny == 0.0) break;
    CoefficientVector candidate = (1.0 / ny) * y;
    CoefficientVector next = op.apply(candidate);
    const double rho_next = inner(candidate, next);
    if (!(rho_next > rho)) break;
    const bool small = rho_next - rho <= tol * rho_next;
    x = std::move(candidate);
    y = std::move(next);
    rho = rho_next;
    if (small) break;
  }
  return rho;
}

StartResult ascend(const S2Grid& grid, int p, int q, CoefficientVector f, CoefficientVector g,
                   const BilinearOptions& opts) {
  f *= 1.0 / f.norm();
  g *= 1.0 / g.norm();
  WeightedProjection op_f(grid, p);
  WeightedProjection op_g(grid, q);

  auto product_value = [&](const CoefficientVector& a, const CoefficientVector& b) {
    const auto av = grid.synthesize(a);
    const auto bv = grid.synthesize(b);
    CompensatedSum sum;
    for (std::size_t i = 0; i < av.size(); ++i) sum.add(grid.rule().weights[i] * std::norm(av[i] * bv[i]));
    return std::sqrt(sum.value());
  };

  StartResult out;
  double value = product_value(f, g);
  out.history.push_back(value);
  int budget = opts.max_iters;
  while (budget > 0) {
    const double round_start = value;

    op_f.set_weight(grid.synthesize(g));
    value = std::max(value, std::sqrt(std::max(power_ascent(op_f, f, opts.tol, budget), 0.0)));
    out.history.push_back(value);

    op_g.set_weight(grid.synthesize(f));
    value = std::max(value, std::sqrt(std::max(power_ascent(op_g, g, opts.tol, budget), 0.0)));
    out.history.push_back(value);

    if (value - round_start <= opts.tol * value) {
      out.converged = true;
      break;
    }
  }
  out.iterations = opts.max_iters - budget;
  out.value = value;
  out.f = f.truncated(p);
  out.g = g.truncated(q);
  return out;
}

CoefficientVector as_degree(const CoefficientVector& v, int degree, const char* which) {
  if (v.single_degree() != degree) {
    throw std::invalid_argument(std::string("best_bilinear_constant: warm start ") + which +
                                " is not in the requested eigenspace");
  }
  return v.truncated(degree);
}

}  // namespace

BilinearConstant best_bilinear_constant(int p, int q, const BilinearOptions& opts) {
  if (p < 0 || q < 0) throw std::invalid_argument("best_bilinear_constant: degrees must be >= 0");
  if (p > kMaxDegree || q > kMaxDegree) throw std::invalid_argument("best_bilinear_constant: degrees above 64");
  if (opts.starts < 0 || opts.max_iters < 1 || !(opts.tol > 0.0)) {
    throw std::invalid_argument("best_bilinear_constant: invalid options");
  }

  // |f|^2 |g|^2 and conj(Y_p) |g|^2 f both have degree <= 2(p + q).
  const S2Grid grid(std::max(p, q), 2 * (p + q));

  std::vector<std::pair<CoefficientVector, CoefficientVector>> starts;
  for (int s = 0; s < opts.starts; ++s) {
    starts.emplace_back(random_harmonic_s2(p, stream_key(opts.seed, 0xb11, 1, static_cast<std::uint64_t>(s))),
                        random_harmonic_s2(q, stream_key(opts.seed, 0xb11, 2, static_cast<std::uint64_t>(s))));
  }
  for (const auto& [f, g] : opts.warm_starts) starts.emplace_back(as_degree(f, p, "f"), as_degree(g, q, "g"));
  if (starts.empty()) throw std::invalid_argument("best_bilinear_constant: no starting points");

  BilinearConstant best;
  best.value = -1.0;
  for (const auto& [f0, g0] : starts) {
    StartResult r = ascend(grid, p, q, f0, g0, opts);
    best.iterations += r.iterations;
    if (r.value > best.value) {
      best.value = r.value;
      best.f = std::move(r.f);
      best.g = std::move(r.g);
      best.converged = r.converged;
      best.history = std::move(r.history);
    }
  }
  return best;
}

}  // namespace sphlab

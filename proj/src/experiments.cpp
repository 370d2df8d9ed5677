#include "sphlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <tuple>

#include "sphlab/quadrature.hpp"
#include "sphlab/random_stream.hpp"
#include "sphlab/s2_grid.hpp"

namespace sphlab {

double lambda_bound(int d, double nu) {
  if (d < 2) throw std::invalid_argument("lambda_bound: d >= 2 required");
  if (!(nu >= 1.0)) throw std::invalid_argument("lambda_bound: nu >= 1 required");
  if (d == 2) return std::pow(nu, 0.25);
  if (d == 3) return std::sqrt(nu) * std::sqrt(std::max(std::log(nu), 1.0));
  return std::pow(nu, 0.5 * (d - 2));
}

double trilinear_bound(int d, double l1, double l2, double l3) {
  if (d < 2) throw std::invalid_argument("trilinear_bound: d >= 2 required");
  if (!(l1 >= 1.0 && l2 >= 1.0 && l3 >= 1.0)) throw std::invalid_argument("trilinear_bound: frequencies >= 1 required");
  const double top = std::max({l1, l2, l3});
  return std::pow(l1 * l2 * l3 / top, (2.0 * d - 3.0) / 4.0);
}

double RatioSample::min_degree() const { return *std::min_element(degrees.begin(), degrees.end()); }

double RatioSample::max_degree() const { return *std::max_element(degrees.begin(), degrees.end()); }

void canonicalize(ExperimentGrid& grid) {
  std::stable_sort(grid.samples.begin(), grid.samples.end(), [](const RatioSample& a, const RatioSample& b) {
    return std::tie(a.degrees, a.families, a.lebesgue_r, a.draw) < std::tie(b.degrees, b.families, b.lebesgue_r, b.draw);
  });
  grid.quadrature_exactness = -1;
  for (const auto& s : grid.samples) grid.quadrature_exactness = std::max(grid.quadrature_exactness, s.quadrature_degree);
}

namespace {

bool same_family(const Family& a, const Family& b) {
  if (a.index() != b.index()) return false;
  if (const auto* za = std::get_if<Zonal>(&a)) {
    const auto& zb = std::get<Zonal>(b);
    return std::equal(za->pole.coords().begin(), za->pole.coords().end(), zb.pole.coords().begin(),
                      zb.pole.coords().end());
  }
  if (const auto* ba = std::get_if<BasisS2>(&a)) return ba->order == std::get<BasisS2>(b).order;
  if (const auto* ra = std::get_if<RandomS2>(&a)) return ra->seed == std::get<RandomS2>(b).seed;
  return true;
}

bool is_even_integer(double r) { return std::isfinite(r) && r >= 2.0 && r == std::floor(r) && std::fmod(r, 2.0) == 0.0; }

std::string describe(std::span<const int> degrees) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < degrees.size(); ++i) os << (i ? ", " : "") << degrees[i];
  os << ')';
  return os.str();
}

struct Measurement {
  double ratio = 0.0;
  int quadrature_degree = -1;
  int integrand_degree = -1;
};

Measurement measure_product(int d, std::span<const Family> families, std::span<const int> degrees, double r,
                            const GridOptions& opts) {
  if (!(r >= 1.0)) throw std::invalid_argument("lebesgue exponent r >= 1 required");
  std::vector<HarmonicSpec> specs;
  for (std::size_t i = 0; i < families.size(); ++i) specs.emplace_back(d, degrees[i], families[i]);
  const int total = std::accumulate(degrees.begin(), degrees.end(), 0);

  const bool all_highest = std::all_of(families.begin(), families.end(),
                                       [](const Family& f) { return std::holds_alternative<HighestWeight>(f); });
  if (all_highest && !opts.force_quadrature) {
    double denom = 1.0;
    for (int n : degrees) denom *= highest_weight_lp(d, n, 2.0);
    return {highest_weight_lp(d, total, r) / denom, -1, -1};
  }

  const bool coaxial_zonal = std::all_of(families.begin(), families.end(), [&](const Family& f) {
    return std::holds_alternative<Zonal>(f) && same_family(f, families.front());
  });
  if (coaxial_zonal && is_even_integer(r) && !opts.force_quadrature) {
    const int ri = static_cast<int>(r);
    const int nodes = ri * total / 2 + 3;  // matches zonal_line_norm
    return {zonal_line_norm(d, degrees, ri), 2 * nodes - 1, ri * total};
  }

  int target = 0;
  int integrand_degree = -1;
  if (is_even_integer(r)) {
    integrand_degree = static_cast<int>(r) * total;
    target = integrand_degree + opts.quadrature_margin;
  } else if (std::isfinite(r)) {
    target = static_cast<int>(std::ceil(r)) * total + opts.quadrature_margin;
  } else {
    target = 20 * std::max(total, 1);
  }
  const std::size_t nodes = sphere_rule_size(d, target);
  if (nodes > opts.node_budget) {
    std::ostringstream os;
    os << "quadrature for degrees " << describe(degrees) << " needs " << nodes << " nodes (budget "
       << opts.node_budget << ")";
    throw BudgetExceeded(os.str());
  }

  const bool needs_synthesis = d == 2 && std::any_of(families.begin(), families.end(), [](const Family& f) {
                                 return std::holds_alternative<RandomS2>(f) || std::holds_alternative<BasisS2>(f);
                               });
  std::optional<S2Grid> grid;
  std::optional<SphereRule> plain_rule;
  if (needs_synthesis) {
    grid.emplace(*std::max_element(degrees.begin(), degrees.end()), target);
  } else {
    plain_rule = sphere_rule(d, target);
  }
  const SphereRule& rule = grid ? grid->rule() : *plain_rule;

  std::vector<complex> product(rule.nodes.size(), complex{1.0, 0.0});
  for (const auto& spec : specs) {
    std::vector<complex> values;
    if (grid && std::holds_alternative<RandomS2>(spec.family())) {
      values = grid->synthesize(random_harmonic_s2(spec.degree(), std::get<RandomS2>(spec.family()).seed));
    } else if (grid && std::holds_alternative<BasisS2>(spec.family())) {
      CoefficientVector basis(spec.degree());
      basis(spec.degree(), std::get<BasisS2>(spec.family()).order) = 1.0;
      values = grid->synthesize(basis);
    } else {
      values.reserve(rule.nodes.size());
      for (const auto& x : rule.nodes) values.push_back(evaluate(spec, x));
    }
    for (std::size_t i = 0; i < product.size(); ++i) product[i] *= values[i];
  }
  return {lp_norm_values(std::span<const complex>(product), rule, r), rule.exact_degree, integrand_degree};
}

RatioSample make_sample(int d, std::span<const Family> families, std::span<const int> degrees, double r,
                        const Measurement& m, double bound) {
  RatioSample s;
  s.dimension = d;
  for (const auto& f : families) s.families.push_back(family_tag(f));
  for (int p : degrees) s.degrees.push_back(p);
  s.lebesgue_r = r;
  s.ratio = m.ratio;
  s.bound = bound;
  s.quadrature_degree = m.quadrature_degree;
  s.integrand_degree = m.integrand_degree;
  return s;
}

}  // namespace

ExperimentGrid ratio_grid(int d, const Family& family_f, const Family& family_g,
                          std::span<const DegreePair> degree_pairs, double lebesgue_r, const GridOptions& opts) {
  ExperimentGrid grid;
  grid.seed = opts.seed;
  const bool symmetric = same_family(family_f, family_g);
  const std::array<Family, 2> families{family_f, family_g};
  for (const auto& pair : degree_pairs) {
    std::array<int, 2> degrees = pair;
    if (symmetric && degrees[0] > degrees[1]) std::swap(degrees[0], degrees[1]);
    const Measurement m = measure_product(d, families, degrees, lebesgue_r, opts);
    const double nu = std::max(1, std::min(pair[0], pair[1]));
    grid.samples.push_back(make_sample(d, families, pair, lebesgue_r, m, lambda_bound(d, nu)));
  }
  canonicalize(grid);
  return grid;
}

ExperimentGrid trilinear_ratio_grid(int d, const std::array<Family, 3>& families,
                                    std::span<const DegreeTriple> degree_triples, double lebesgue_r,
                                    const GridOptions& opts) {
  ExperimentGrid grid;
  grid.seed = opts.seed;
  for (const auto& triple : degree_triples) {
    const Measurement m = measure_product(d, families, triple, lebesgue_r, opts);
    const double bound = trilinear_bound(d, std::max(1, triple[0]), std::max(1, triple[1]), std::max(1, triple[2]));
    grid.samples.push_back(make_sample(d, families, triple, lebesgue_r, m, bound));
  }
  canonicalize(grid);
  return grid;
}

ExperimentGrid critical_p_scan(int n_fixed, std::span<const int> m_values, std::span<const double> r_values) {
  if (n_fixed < 0) throw std::invalid_argument("critical_p_scan: n >= 0 required");
  ExperimentGrid grid;
  const std::array<Family, 2> families{HighestWeight{}, HighestWeight{}};
  for (double r : r_values) {
    if (!(r >= 2.0) || !std::isfinite(r)) throw std::invalid_argument("critical_p_scan: r in [2, inf) required");
    for (int m : m_values) {
      if (m < 0) throw std::invalid_argument("critical_p_scan: m >= 0 required");
      const double ratio =
          highest_weight_lp(2, n_fixed + m, r) / (highest_weight_lp(2, n_fixed, 2.0) * highest_weight_lp(2, m, 2.0));
      const std::array<int, 2> degrees{n_fixed, m};
      grid.samples.push_back(make_sample(2, families, degrees, r, {ratio, -1, -1},
                                         lambda_bound(2, std::max(1, std::min(n_fixed, m)))));
    }
  }
  canonicalize(grid);
  return grid;
}

std::pair<int, int> window_band(double center, double half_width) {
  int lo = 0;
  while (sqrt_laplace_eigenvalue(2, lo) < center - half_width) ++lo;
  int hi = lo;
  while (sqrt_laplace_eigenvalue(2, hi + 1) <= center + half_width) ++hi;
  return {lo, hi};
}

namespace {

double windowed_ratio_on(const S2Grid& grid, double lambda, double mu, const CoefficientVector& f,
                         const CoefficientVector& g) {
  const auto cf = grid.synthesize(windowed_projector(SpectralWindow(lambda), f));
  const auto cg = grid.synthesize(windowed_projector(SpectralWindow(mu), g));
  std::vector<complex> product(cf.size());
  for (std::size_t i = 0; i < cf.size(); ++i) product[i] = cf[i] * cg[i];
  return lp_norm_values(std::span<const complex>(product), grid.rule(), 2.0) / (f.norm() * g.norm());
}

}  // namespace

double windowed_ratio(double lambda, double mu, const CoefficientVector& f, const CoefficientVector& g,
                      int quadrature_margin) {
  const auto sf = f.degree_support();
  const auto sg = g.degree_support();
  if (!sf || !sg) throw std::invalid_argument("windowed_ratio: zero input");
  const S2Grid grid(std::max(sf->second, sg->second), 2 * (sf->second + sg->second) + quadrature_margin);
  return windowed_ratio_on(grid, lambda, mu, f.truncated(sf->second), g.truncated(sg->second));
}

ExperimentGrid windowed_band_experiment(double lambda, double mu, int n_draws, std::uint64_t seed,
                                        const WindowOptions& opts) {
  if (!(lambda >= 1.0) || !(mu >= 1.0)) throw std::invalid_argument("windowed_band_experiment: centers >= 1 required");
  if (n_draws < 1) throw std::invalid_argument("windowed_band_experiment: n_draws >= 1 required");
  const auto [f_lo, f_hi] = window_band(lambda, opts.half_width);
  const auto [g_lo, g_hi] = window_band(mu, opts.half_width);
  if (std::max(f_hi, g_hi) > opts.max_degree_budget) {
    std::ostringstream os;
    os << "window truncation needs degree " << std::max(f_hi, g_hi) << " (L_max budget " << opts.max_degree_budget
       << ")";
    throw BudgetExceeded(os.str());
  }
  const int integrand_degree = 2 * (f_hi + g_hi);
  const S2Grid grid(std::max(f_hi, g_hi), integrand_degree + opts.quadrature_margin);

  ExperimentGrid out;
  out.seed = seed;
  for (int k = 0; k < n_draws; ++k) {
    const auto draw = static_cast<std::uint64_t>(k);
    const CoefficientVector f = random_band_s2(f_lo, f_hi, stream_key(seed, 0x1f, draw));
    const CoefficientVector g = random_band_s2(g_lo, g_hi, stream_key(seed, 0x2f, draw));
    RatioSample s;
    s.dimension = 2;
    s.families = {"windowed-random", "windowed-random"};
    s.degrees = {lambda, mu};
    s.lebesgue_r = 2.0;
    s.ratio = windowed_ratio_on(grid, lambda, mu, f, g);
    s.bound = lambda_bound(2, std::min(lambda, mu));
    s.quadrature_degree = grid.rule().exact_degree;
    s.integrand_degree = integrand_degree;
    s.draw = k;
    out.samples.push_back(std::move(s));
  }
  canonicalize(out);
  return out;
}

std::vector<std::pair<double, double>> abscissa_ratio_pairs(const ExperimentGrid& grid, Abscissa x) {
  std::vector<std::pair<double, double>> out;
  for (const auto& s : grid.samples) {
    double nu = 0.0;
    switch (x) {
      case Abscissa::min_degree: nu = s.min_degree(); break;
      case Abscissa::max_degree: nu = s.max_degree(); break;
      case Abscissa::first_degree: nu = s.degrees.at(0); break;
      case Abscissa::second_degree: nu = s.degrees.at(1); break;
    }
    out.emplace_back(nu, s.ratio);
  }
  return out;
}

double empirical_constant(const ExperimentGrid& grid) {
  double c = 0.0;
  for (const auto& s : grid.samples) c = std::max(c, s.ratio_over_bound());
  return c;
}

std::optional<double> empirical_constant_in(const ExperimentGrid& grid, Abscissa x, double lo, double hi) {
  std::optional<double> c;
  const auto pairs = abscissa_ratio_pairs(grid, x);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].first < lo || pairs[i].first > hi) continue;
    c = std::max(c.value_or(0.0), grid.samples[i].ratio_over_bound());
  }
  return c;
}

}  // namespace sphlab

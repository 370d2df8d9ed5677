#include "sphlab/studies.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <numbers>
#include <sstream>

#include "sphlab/coupling.hpp"
#include "sphlab/quadrature.hpp"
#include "sphlab/random_stream.hpp"

namespace sphlab {

namespace {

std::string g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Family family_from(const std::string& name, int d, std::uint64_t seed, std::uint64_t factor) {
  if (name == "highest-weight") return HighestWeight{};
  if (name == "zonal") return Zonal{SpherePoint::north_pole(d)};
  if (name == "zonal-transverse") {
    std::vector<double> c(static_cast<std::size_t>(d) + 1, 0.0);
    c[0] = 1.0;
    return Zonal{SpherePoint(std::move(c))};
  }
  if (name == "random") return RandomS2{stream_key(seed, 0xfa, factor)};
  if (name.rfind("basis:", 0) == 0) return BasisS2{std::stoi(name.substr(6))};
  throw ConfigError("family", 0, "unknown family '" + name + "'");
}

std::vector<DegreePair> degree_pairs(const ExperimentConfig& cfg) {
  std::vector<DegreePair> out;
  for (int p : degree_grid(cfg)) out.push_back({p, partner_degree(cfg, p)});
  return out;
}

void append(ExperimentGrid& into, const ExperimentGrid& from) {
  into.samples.insert(into.samples.end(), from.samples.begin(), from.samples.end());
}

std::vector<double> exponents_in(const ExperimentGrid& grid) {
  std::vector<double> rs;
  for (const auto& s : grid.samples) {
    if (std::find(rs.begin(), rs.end(), s.lebesgue_r) == rs.end()) rs.push_back(s.lebesgue_r);
  }
  return rs;
}

ExperimentGrid only_exponent(const ExperimentGrid& grid, double r) {
  ExperimentGrid out;
  for (const auto& s : grid.samples) {
    if (s.lebesgue_r == r) out.samples.push_back(s);
  }
  return out;
}

// One fit per Lebesgue exponent when at least 3 samples have distinct abscissae.
void add_fits(ReportDocument& doc, Abscissa axis, bool with_loglog = false) {
  for (double r : exponents_in(doc.grid)) {
    const ExperimentGrid sub = only_exponent(doc.grid, r);
    const auto pairs = abscissa_ratio_pairs(sub, axis);
    std::vector<double> xs;
    for (const auto& [x, y] : pairs) xs.push_back(x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    const bool positive = std::all_of(pairs.begin(), pairs.end(), [](const auto& p) { return p.first > 0 && p.second > 0; });
    if (xs.size() < 3 || !positive) continue;
    const std::string label = "r=" + format_exponent(r);
    doc.fits.push_back({label, abscissa_name(axis), fit_exponent(pairs)});
    const bool loglog_ok = std::all_of(pairs.begin(), pairs.end(), [](const auto& p) { return p.first > 1.0; });
    if (with_loglog && loglog_ok && xs.size() >= 4) {
      doc.fits.push_back({label + " with log log", abscissa_name(axis), fit_exponent(pairs, true)});
    }
  }
}

// C_emp overall and on dyadic ranges [P, 2P], P >= 16.
void add_constants(ReportDocument& doc, Abscissa axis, bool check_stability) {
  doc.constants.push_back({"C_emp", empirical_constant(doc.grid)});
  double hi = 0.0, lo = std::numeric_limits<double>::infinity();
  int ranges = 0;
  double top = 0.0;
  for (const auto& [x, y] : abscissa_ratio_pairs(doc.grid, axis)) top = std::max(top, x);
  for (double p = 16; 2 * p <= top; p *= 2) {
    const auto c = empirical_constant_in(doc.grid, axis, p, 2 * p);
    if (!c) continue;
    doc.constants.push_back({"C_emp[" + g6(p) + "," + g6(2 * p) + "]", *c});
    hi = std::max(hi, *c);
    lo = std::min(lo, *c);
    ++ranges;
  }
  if (ranges >= 2) {
    doc.constants.push_back({"C_emp dyadic spread", hi / lo});
    if (check_stability) {
      doc.checks.push_back({"empirical constant varies by at most 2x across dyadic ranges", hi / lo <= 2.0,
                            "max/min = " + g6(hi / lo)});
    }
  }
}

void add_sample_checks(ReportDocument& doc) {
  bool finite = true, bounded = true, exact = true;
  for (const auto& s : doc.grid.samples) {
    finite = finite && std::isfinite(s.ratio) && s.ratio >= 0.0;
    bounded = bounded && std::isfinite(s.bound) && s.bound > 0.0;
    if (s.integrand_degree >= 0) exact = exact && s.quadrature_degree >= s.integrand_degree;
  }
  doc.checks.push_back({"ratios finite and nonnegative", finite, ""});
  doc.checks.push_back({"bounds finite and positive", bounded, ""});
  doc.checks.push_back({"quadrature exact for every polynomial integrand", exact, ""});
}

GridOptions grid_options(const ExperimentConfig& cfg) {
  GridOptions opts;
  opts.quadrature_margin = cfg.quadrature_margin;
  opts.node_budget = cfg.node_budget;
  opts.seed = cfg.seed;
  return opts;
}

void run_bilinear(ReportDocument& doc, bool sharp_family) {
  const auto& cfg = doc.config;
  const Family f = family_from(cfg.family_f, cfg.dimension, cfg.seed, 0);
  const Family g = family_from(cfg.family_g, cfg.dimension, cfg.seed, 1);
  const auto pairs = degree_pairs(cfg);
  for (double r : cfg.lebesgue_r) append(doc.grid, ratio_grid(cfg.dimension, f, g, pairs, r, grid_options(cfg)));
  canonicalize(doc.grid);
  add_fits(doc, Abscissa::min_degree, cfg.dimension == 3);
  add_constants(doc, Abscissa::min_degree, sharp_family);
}

void run_trilinear(ReportDocument& doc) {
  const auto& cfg = doc.config;
  const std::array<Family, 3> families{family_from(cfg.family_f, cfg.dimension, cfg.seed, 0),
                                       family_from(cfg.family_g, cfg.dimension, cfg.seed, 1),
                                       family_from(cfg.family_h, cfg.dimension, cfg.seed, 2)};
  std::vector<DegreeTriple> triples;
  for (const auto& [p, q] : degree_pairs(cfg)) triples.push_back({p, q, third_degree(cfg, p, q)});
  for (double r : cfg.lebesgue_r) {
    append(doc.grid, trilinear_ratio_grid(cfg.dimension, families, triples, r, grid_options(cfg)));
  }
  canonicalize(doc.grid);
  add_fits(doc, Abscissa::first_degree);
  doc.constants.push_back({"C_emp", empirical_constant(doc.grid)});
}

void run_frequency(ReportDocument& doc) {
  const auto& cfg = doc.config;
  if (cfg.partner.rfind("fixed:", 0) != 0) throw ConfigError("partner", 0, "frequency-disappearance needs fixed:N");
  const auto ms = degree_grid(cfg);
  const int n = partner_degree(cfg, ms.front());
  for (double r : cfg.lebesgue_r) {
    std::vector<DegreePair> pairs;
    for (int m : ms) pairs.push_back({n, m});
    append(doc.grid, ratio_grid(2, HighestWeight{}, HighestWeight{}, pairs, r, grid_options(cfg)));
  }
  canonicalize(doc.grid);
  add_fits(doc, Abscissa::second_degree);
  doc.constants.push_back({"C_emp", empirical_constant(doc.grid)});
  // ||e_N||_2^2 ~ 2 pi^{3/2} N^{-1/2}, so the L^2 ratio tends to (2 pi^{3/2})^{-1/2} n^{1/4}
  const double asymptote = std::pow(2.0 * std::pow(std::numbers::pi, 1.5), -0.5) * std::pow(n, 0.25);
  doc.constants.push_back({"large-m asymptote", asymptote});

  const ExperimentGrid l2 = only_exponent(doc.grid, 2.0);
  if (l2.samples.size() >= 2) {
    bool monotone = true;
    double lo = l2.samples.front().ratio, hi = lo;
    for (std::size_t i = 1; i < l2.samples.size(); ++i) {
      monotone = monotone && l2.samples[i].ratio >= l2.samples[i - 1].ratio;
      lo = std::min(lo, l2.samples[i].ratio);
      hi = std::max(hi, l2.samples[i].ratio);
    }
    doc.constants.push_back({"max/min over m", hi / lo});
    doc.constants.push_back({"final/asymptote", l2.samples.back().ratio / asymptote});
    doc.checks.push_back({"L2 ratio monotone in the larger degree", monotone, ""});
    const bool in_range = std::all_of(ms.begin(), ms.end(), [&](int m) { return m >= 16 * n && m <= 64 * n; });
    if (in_range) doc.checks.push_back({"L2 ratio flat on [16n, 64n]", hi / lo <= 1.02, "max/min = " + g6(hi / lo)});
  }
}

void run_critical(ReportDocument& doc) {
  const auto& cfg = doc.config;
  if (cfg.partner.rfind("fixed:", 0) != 0) throw ConfigError("partner", 0, "critical-exponent needs fixed:N");
  const auto ms = degree_grid(cfg);
  const int n = partner_degree(cfg, ms.front());
  doc.grid = critical_p_scan(n, ms, cfg.lebesgue_r);
  add_fits(doc, Abscissa::second_degree);
  for (double r : cfg.lebesgue_r) doc.constants.push_back({"expected exponent r=" + format_exponent(r), 0.25 - 0.5 / r});
}

void run_windowed(ReportDocument& doc) {
  const auto& cfg = doc.config;
  WindowOptions opts;
  opts.quadrature_margin = cfg.quadrature_margin;
  double hi = 0.0, lo = std::numeric_limits<double>::infinity();
  for (const auto& [lambda, mu] : degree_pairs(cfg)) {
    const ExperimentGrid g = windowed_band_experiment(lambda, mu, cfg.draws, cfg.seed, opts);
    const double c = empirical_constant(g);
    doc.constants.push_back({"C_emp lambda=" + std::to_string(lambda) + " mu=" + std::to_string(mu), c});
    hi = std::max(hi, c);
    lo = std::min(lo, c);
    append(doc.grid, g);
  }
  canonicalize(doc.grid);
  doc.constants.push_back({"C_emp", empirical_constant(doc.grid)});
  doc.constants.push_back({"C_emp spread across centers", hi / lo});
  add_fits(doc, Abscissa::min_degree);
}

void run_best(ReportDocument& doc) {
  const auto& cfg = doc.config;
  for (const auto& [p, q] : degree_pairs(cfg)) {
    BilinearOptions opts;
    opts.starts = cfg.starts;
    opts.tol = cfg.tol;
    opts.max_iters = cfg.max_iters;
    opts.seed = cfg.seed;
    CoefficientVector hw_f(p), hw_g(q), z_f(p), z_g(q);
    hw_f(p, p) = 1.0;
    hw_g(q, q) = 1.0;
    z_f(p, 0) = 1.0;
    z_g(q, 0) = 1.0;
    opts.warm_starts = {{hw_f, hw_g}, {z_f, z_g}};
    const BilinearConstant best = best_bilinear_constant(p, q, opts);

    // sampled ratios, each computed without the optimizer
    const int deg[2] = {p, q};
    double sampled = zonal_line_norm(2, deg, 2);
    sampled = std::max(sampled, highest_weight_lp(2, p + q, 2.0) / (highest_weight_lp(2, p, 2.0) * highest_weight_lp(2, q, 2.0)));
    for (int k = 0; k < cfg.draws; ++k) {
      const auto f = random_harmonic_s2(p, stream_key(cfg.seed, 0xb5, 2 * static_cast<std::uint64_t>(k)));
      const auto g = random_harmonic_s2(q, stream_key(cfg.seed, 0xb5, 2 * static_cast<std::uint64_t>(k) + 1));
      sampled = std::max(sampled, product_expand(f, g).norm());
    }
    const std::string tag = "p=" + std::to_string(p) + " q=" + std::to_string(q);
    doc.constants.push_back({"max sampled ratio " + tag, sampled});
    doc.constants.push_back({"converged " + tag, best.converged ? 1.0 : 0.0});
    doc.checks.push_back({"best constant dominates sampled ratios " + tag, best.value >= sampled * (1 - 1e-12),
                          "best " + g6(best.value) + ", sampled " + g6(sampled)});

    RatioSample s;
    s.dimension = 2;
    s.families = {"best", "best"};
    s.degrees = {static_cast<double>(p), static_cast<double>(q)};
    s.ratio = best.value;
    s.bound = lambda_bound(2, std::max(1, std::min(p, q)));
    s.quadrature_degree = 2 * (p + q);
    s.integrand_degree = 2 * (p + q);
    doc.grid.samples.push_back(std::move(s));
  }
  canonicalize(doc.grid);
  add_fits(doc, Abscissa::min_degree);
  doc.constants.push_back({"C_emp", empirical_constant(doc.grid)});
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

ReportDocument run_study(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();
  ReportDocument doc;
  doc.config = cfg;
  const std::string& s = cfg.study;
  if (s == "bilinear-sharpness-s2") {
    run_bilinear(doc, true);
  } else if (s == "zonal-sharpness") {
    run_bilinear(doc, cfg.dimension >= 3 && cfg.family_f == "zonal" && cfg.family_g == "zonal");
  } else if (s == "ratio-grid") {
    if (cfg.family_h.empty()) {
      run_bilinear(doc, false);
    } else {
      run_trilinear(doc);
    }
  } else if (s == "trilinear-s2") {
    run_trilinear(doc);
  } else if (s == "frequency-disappearance") {
    run_frequency(doc);
  } else if (s == "critical-exponent") {
    run_critical(doc);
  } else if (s == "windowed-projector") {
    run_windowed(doc);
  } else if (s == "best-constant") {
    run_best(doc);
  }
  add_sample_checks(doc);
  doc.grid.seed = cfg.seed;
  doc.metadata.tool_version = kToolVersion;
  doc.metadata.timestamp = utc_now();
  doc.grid.timestamp = doc.metadata.timestamp;
  doc.metadata.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return doc;
}

int exit_status(const ReportDocument& doc) { return doc.all_checks_passed() ? 0 : 3; }

std::string summary(const ReportDocument& doc) {
  std::ostringstream os;
  os << doc.config.study << ": " << doc.grid.samples.size() << " samples, d = " << doc.config.dimension
     << ", seed = " << doc.config.seed << "\n";
  for (const auto& f : doc.fits) {
    os << "  fit " << f.label << " vs " << f.abscissa << ": exponent " << g6(f.fit.exponent) << ", r^2 "
       << g6(f.fit.r_squared);
    if (f.fit.loglog_coefficient) os << ", loglog " << g6(*f.fit.loglog_coefficient);
    os << "\n";
  }
  for (const auto& c : doc.constants) os << "  " << c.label << " = " << g6(c.value) << "\n";
  for (const auto& c : doc.checks) {
    os << "  [" << (c.passed ? "ok" : "VIOLATED") << "] " << c.name;
    if (!c.detail.empty()) os << " (" << c.detail << ")";
    os << "\n";
  }
  return os.str();
}

}  // namespace sphlab

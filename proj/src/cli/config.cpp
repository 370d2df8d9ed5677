#include "sphlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace sphlab {

ConfigError::ConfigError(std::string field, int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + field + ": " + message
                                  : field + ": " + message),
      field_(std::move(field)),
      line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

template <class T>
T number_or_throw(std::string_view s, const std::string& field, int line) {
  T v{};
  if (!parse_number(s, v)) throw ConfigError(field, line, "cannot parse '" + std::string(s) + "'");
  return v;
}

double parse_exponent(std::string_view s, const std::string& field, int line) {
  s = trim(s);
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  return number_or_throw<double>(s, field, line);
}

bool parse_bool(std::string_view s, const std::string& field, int line) {
  s = trim(s);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(field, line, "expected true or false, got '" + std::string(s) + "'");
}

// rule "kind:N" with N a positive integer
bool parse_rule(std::string_view rule, std::string_view kind, int& n) {
  if (rule.substr(0, kind.size() + 1) != std::string(kind) + ":") return false;
  return parse_number(rule.substr(kind.size() + 1), n);
}

bool valid_family(std::string_view name, int d) {
  if (name == "highest-weight" || name == "zonal" || name == "zonal-transverse") return true;
  if (d != 2) return false;
  if (name == "random") return true;
  int m = 0;
  return name.substr(0, 6) == "basis:" && parse_number(name.substr(6), m);
}

using Setter = std::function<void(ExperimentConfig&, std::string_view, int)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"study", [](ExperimentConfig& c, std::string_view v, int) { c.study = v; }},
      {"dimension",
       [](ExperimentConfig& c, std::string_view v, int l) { c.dimension = number_or_throw<int>(v, "dimension", l); }},
      {"family_f", [](ExperimentConfig& c, std::string_view v, int) { c.family_f = v; }},
      {"family_g", [](ExperimentConfig& c, std::string_view v, int) { c.family_g = v; }},
      {"family_h", [](ExperimentConfig& c, std::string_view v, int) { c.family_h = v; }},
      {"degrees", [](ExperimentConfig& c, std::string_view v, int) { c.degrees = v; }},
      {"partner", [](ExperimentConfig& c, std::string_view v, int) { c.partner = v; }},
      {"third", [](ExperimentConfig& c, std::string_view v, int) { c.third = v; }},
      {"lebesgue_r",
       [](ExperimentConfig& c, std::string_view v, int l) {
         c.lebesgue_r.clear();
         if (trim(v).empty()) return;
         for (auto item : split(v, ',')) c.lebesgue_r.push_back(parse_exponent(item, "lebesgue_r", l));
       }},
      {"seed", [](ExperimentConfig& c, std::string_view v, int l) { c.seed = number_or_throw<std::uint64_t>(v, "seed", l); }},
      {"quadrature_margin",
       [](ExperimentConfig& c, std::string_view v, int l) {
         c.quadrature_margin = number_or_throw<int>(v, "quadrature_margin", l);
       }},
      {"node_budget",
       [](ExperimentConfig& c, std::string_view v, int l) {
         c.node_budget = number_or_throw<std::size_t>(v, "node_budget", l);
       }},
      {"draws", [](ExperimentConfig& c, std::string_view v, int l) { c.draws = number_or_throw<int>(v, "draws", l); }},
      {"starts", [](ExperimentConfig& c, std::string_view v, int l) { c.starts = number_or_throw<int>(v, "starts", l); }},
      {"tol", [](ExperimentConfig& c, std::string_view v, int l) { c.tol = number_or_throw<double>(v, "tol", l); }},
      {"max_iters",
       [](ExperimentConfig& c, std::string_view v, int l) { c.max_iters = number_or_throw<int>(v, "max_iters", l); }},
      {"output_dir", [](ExperimentConfig& c, std::string_view v, int) { c.output_dir = v; }},
      {"format", [](ExperimentConfig& c, std::string_view v, int) { c.format = v; }},
      {"plot", [](ExperimentConfig& c, std::string_view v, int l) { c.plot = parse_bool(v, "plot", l); }},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& study_names() {
  static const std::vector<std::string> names = {
      "bilinear-sharpness-s2", "frequency-disappearance", "zonal-sharpness", "trilinear-s2",
      "critical-exponent",     "windowed-projector",      "best-constant",   "ratio-grid",
  };
  return names;
}

ExperimentConfig default_config(std::string_view study) {
  const auto& names = study_names();
  if (std::find(names.begin(), names.end(), study) == names.end()) {
    throw ConfigError("study", 0, "unknown study '" + std::string(study) + "'");
  }
  ExperimentConfig c;
  c.study = study;
  if (study == "bilinear-sharpness-s2") {
    c.degrees = "8..512";
    c.partner = "scale:8";
  } else if (study == "frequency-disappearance") {
    c.degrees = "256,512,1024";
    c.partner = "fixed:16";
  } else if (study == "zonal-sharpness") {
    c.dimension = 4;
    c.family_f = c.family_g = "zonal";
    c.degrees = "8..256";
  } else if (study == "trilinear-s2") {
    c.family_h = "highest-weight";
    c.degrees = "8..256";
    c.partner = "fixed:16";
    c.third = "scale-sum:8";
  } else if (study == "critical-exponent") {
    c.degrees = "32..256";
    c.partner = "fixed:2";
    c.lebesgue_r = {2.0, 4.0};
  } else if (study == "windowed-projector") {
    c.family_f = c.family_g = "random";
    c.degrees = "32,64,128";
  } else if (study == "best-constant") {
    c.family_f = c.family_g = "best";
    c.degrees = "4..32";
  }
  return c;
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig base) {
  int line_no = 0;
  std::map<std::string, int> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("syntax", line_no, "expected 'key = value'");
    const std::string key{trim(line.substr(0, eq))};
    const auto value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(key, line_no, "unknown key");
    if (const auto prev = seen.find(key); prev != seen.end()) {
      throw ConfigError(key, line_no, "duplicate key (first set on line " + std::to_string(prev->second) + ")");
    }
    seen[key] = line_no;
    it->second(base, value, line_no);
  }
  validate(base);
  return base;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", 0, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

std::vector<int> degree_grid(const ExperimentConfig& cfg) {
  const std::string_view spec = trim(cfg.degrees);
  auto fail = [&](const std::string& why) -> ConfigError {
    return ConfigError("degrees", 0, "degree grid spec '" + std::string(spec) + "': " + why);
  };
  if (spec.empty()) throw fail("empty");
  std::vector<int> out;
  if (const auto dots = spec.find(".."); dots != std::string_view::npos) {
    int lo = 0, hi = 0;
    if (!parse_number(spec.substr(0, dots), lo) || !parse_number(spec.substr(dots + 2), hi)) {
      throw fail("expected 'a..b'");
    }
    if (lo < 1 || hi < lo) throw fail("need 1 <= a <= b");
    for (long v = lo; v <= hi; v *= 2) out.push_back(static_cast<int>(v));
    return out;
  }
  for (auto item : split(spec, ',')) {
    int v = 0;
    if (!parse_number(item, v)) throw fail("cannot parse '" + std::string(item) + "'");
    if (v < 0) throw fail("degrees must be >= 0");
    out.push_back(v);
  }
  return out;
}

int partner_degree(const ExperimentConfig& cfg, int degree) {
  int n = 0;
  if (cfg.partner == "same") return degree;
  if (parse_rule(cfg.partner, "scale", n) && n >= 1) return n * degree;
  if (parse_rule(cfg.partner, "fixed", n) && n >= 0) return n;
  throw ConfigError("partner", 0, "expected same, scale:K or fixed:N, got '" + cfg.partner + "'");
}

int third_degree(const ExperimentConfig& cfg, int first, int second) {
  int n = 0;
  if (cfg.third == "same") return first;
  if (parse_rule(cfg.third, "scale-sum", n) && n >= 1) return n * (first + second);
  if (parse_rule(cfg.third, "fixed", n) && n >= 0) return n;
  throw ConfigError("third", 0, "expected same, scale-sum:K or fixed:N, got '" + cfg.third + "'");
}

void validate(const ExperimentConfig& c) {
  default_config(c.study);  // rejects unknown names
  if (c.dimension < 2 || c.dimension > 5) throw ConfigError("dimension", 0, "must be in 2..5");
  const std::vector<int> grid = degree_grid(c);
  for (int p : grid) partner_degree(c, p);
  if (c.lebesgue_r.empty()) throw ConfigError("lebesgue_r", 0, "at least one exponent required");
  for (double r : c.lebesgue_r) {
    if (!(r >= 1.0)) throw ConfigError("lebesgue_r", 0, "exponents must be >= 1");
  }
  if (c.quadrature_margin < 0) throw ConfigError("quadrature_margin", 0, "must be >= 0");
  if (c.node_budget < 1) throw ConfigError("node_budget", 0, "must be >= 1");
  if (c.draws < 1) throw ConfigError("draws", 0, "must be >= 1");
  if (c.starts < 1) throw ConfigError("starts", 0, "must be >= 1");
  if (!(c.tol > 0.0)) throw ConfigError("tol", 0, "must be > 0");
  if (c.max_iters < 1) throw ConfigError("max_iters", 0, "must be >= 1");
  if (c.format != "csv" && c.format != "json") throw ConfigError("format", 0, "must be csv or json");
  if (c.output_dir.empty()) throw ConfigError("output_dir", 0, "must not be empty");

  const bool best = c.study == "best-constant";
  const bool windowed = c.study == "windowed-projector";
  if (!best && !windowed) {
    for (const auto& [field, name] : {std::pair{"family_f", c.family_f}, {"family_g", c.family_g}}) {
      if (!valid_family(name, c.dimension)) {
        throw ConfigError(field, 0, "unknown family '" + name + "' for d = " + std::to_string(c.dimension));
      }
    }
  }
  if (!c.family_h.empty()) {
    if (!valid_family(c.family_h, c.dimension)) throw ConfigError("family_h", 0, "unknown family '" + c.family_h + "'");
    if (c.third.empty()) throw ConfigError("third", 0, "required when family_h is set");
    for (int p : grid) third_degree(c, p, partner_degree(c, p));
  }

  if (c.study == "bilinear-sharpness-s2" || c.study == "frequency-disappearance" || c.study == "trilinear-s2" ||
      c.study == "critical-exponent" || windowed || best) {
    if (c.dimension != 2) throw ConfigError("dimension", 0, "study " + c.study + " runs on S^2 only");
  }
  if (c.study == "trilinear-s2" && c.family_h.empty()) throw ConfigError("family_h", 0, "trilinear-s2 needs three factors");
  if (c.study == "critical-exponent") {
    for (double r : c.lebesgue_r) {
      if (!(r >= 2.0) || !std::isfinite(r)) throw ConfigError("lebesgue_r", 0, "critical-exponent needs r in [2, inf)");
    }
  }
  if (windowed) {
    for (int p : grid) {
      if (p < 1) throw ConfigError("degrees", 0, "window centers must be >= 1");
    }
  }
  if (best) {
    for (int p : grid) {
      if (p > 64 || partner_degree(c, p) > 64) throw ConfigError("degrees", 0, "best-constant is limited to degree 64");
    }
  }
}

std::string format_exponent(double r) {
  if (std::isinf(r)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", r);
  return buf;
}

}  // namespace sphlab

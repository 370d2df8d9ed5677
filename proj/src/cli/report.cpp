#include "sphlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace sphlab {

using nlohmann::json;

namespace {

// JSON has no infinities; non-finite values travel as strings.
json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double denum(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  throw std::invalid_argument("report: bad number '" + s + "'");
}

json config_json(const ExperimentConfig& c) {
  json r = json::array();
  for (double v : c.lebesgue_r) r.push_back(num(v));
  return {{"study", c.study},
          {"dimension", c.dimension},
          {"family_f", c.family_f},
          {"family_g", c.family_g},
          {"family_h", c.family_h},
          {"degrees", c.degrees},
          {"partner", c.partner},
          {"third", c.third},
          {"lebesgue_r", r},
          {"seed", c.seed},
          {"quadrature_margin", c.quadrature_margin},
          {"node_budget", c.node_budget},
          {"draws", c.draws},
          {"starts", c.starts},
          {"tol", c.tol},
          {"max_iters", c.max_iters},
          {"output_dir", c.output_dir},
          {"format", c.format},
          {"plot", c.plot}};
}

ExperimentConfig config_from(const json& j) {
  ExperimentConfig c;
  c.study = j.at("study").get<std::string>();
  c.dimension = j.at("dimension").get<int>();
  c.family_f = j.at("family_f").get<std::string>();
  c.family_g = j.at("family_g").get<std::string>();
  c.family_h = j.at("family_h").get<std::string>();
  c.degrees = j.at("degrees").get<std::string>();
  c.partner = j.at("partner").get<std::string>();
  c.third = j.at("third").get<std::string>();
  c.lebesgue_r.clear();
  for (const auto& v : j.at("lebesgue_r")) c.lebesgue_r.push_back(denum(v));
  c.seed = j.at("seed").get<std::uint64_t>();
  c.quadrature_margin = j.at("quadrature_margin").get<int>();
  c.node_budget = j.at("node_budget").get<std::size_t>();
  c.draws = j.at("draws").get<int>();
  c.starts = j.at("starts").get<int>();
  c.tol = j.at("tol").get<double>();
  c.max_iters = j.at("max_iters").get<int>();
  c.output_dir = j.at("output_dir").get<std::string>();
  c.format = j.at("format").get<std::string>();
  c.plot = j.at("plot").get<bool>();
  return c;
}

json sample_json(const RatioSample& s) {
  json degrees = json::array();
  for (double d : s.degrees) degrees.push_back(num(d));
  return {{"dimension", s.dimension},
          {"families", s.families},
          {"degrees", degrees},
          {"lebesgue_r", num(s.lebesgue_r)},
          {"ratio", num(s.ratio)},
          {"bound", num(s.bound)},
          {"ratio_over_bound", num(s.ratio_over_bound())},
          {"quadrature_degree", s.quadrature_degree},
          {"integrand_degree", s.integrand_degree},
          {"draw", s.draw}};
}

RatioSample sample_from(const json& j) {
  RatioSample s;
  s.dimension = j.at("dimension").get<int>();
  s.families = j.at("families").get<std::vector<std::string>>();
  for (const auto& d : j.at("degrees")) s.degrees.push_back(denum(d));
  s.lebesgue_r = denum(j.at("lebesgue_r"));
  s.ratio = denum(j.at("ratio"));
  s.bound = denum(j.at("bound"));
  s.quadrature_degree = j.at("quadrature_degree").get<int>();
  s.integrand_degree = j.at("integrand_degree").get<int>();
  s.draw = j.at("draw").get<int>();
  return s;
}

json fit_json(const NamedFit& f) {
  json j = {{"label", f.label},
            {"abscissa", f.abscissa},
            {"exponent", num(f.fit.exponent)},
            {"intercept", num(f.fit.intercept)},
            {"r_squared", num(f.fit.r_squared)},
            {"residual_max", num(f.fit.residual_max)},
            {"loglog_coefficient", nullptr}};
  if (f.fit.loglog_coefficient) j["loglog_coefficient"] = num(*f.fit.loglog_coefficient);
  return j;
}

NamedFit fit_from(const json& j) {
  NamedFit f;
  f.label = j.at("label").get<std::string>();
  f.abscissa = j.at("abscissa").get<std::string>();
  f.fit.exponent = denum(j.at("exponent"));
  f.fit.intercept = denum(j.at("intercept"));
  f.fit.r_squared = denum(j.at("r_squared"));
  f.fit.residual_max = denum(j.at("residual_max"));
  if (!j.at("loglog_coefficient").is_null()) f.fit.loglog_coefficient = denum(j.at("loglog_coefficient"));
  return f;
}

std::string g12(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

bool ReportDocument::all_checks_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

Abscissa parse_abscissa(std::string_view name) {
  if (name == "min_degree") return Abscissa::min_degree;
  if (name == "max_degree") return Abscissa::max_degree;
  if (name == "first_degree") return Abscissa::first_degree;
  if (name == "second_degree") return Abscissa::second_degree;
  throw std::invalid_argument("unknown abscissa '" + std::string(name) + "'");
}

std::string abscissa_name(Abscissa x) {
  switch (x) {
    case Abscissa::min_degree: return "min_degree";
    case Abscissa::max_degree: return "max_degree";
    case Abscissa::first_degree: return "first_degree";
    case Abscissa::second_degree: return "second_degree";
  }
  return "min_degree";
}

std::string to_json(const ReportDocument& doc, bool include_runtime) {
  json samples = json::array();
  for (const auto& s : doc.grid.samples) samples.push_back(sample_json(s));
  json grid = {{"samples", samples}, {"seed", doc.grid.seed}, {"quadrature_exactness", doc.grid.quadrature_exactness}};
  json fits = json::array();
  for (const auto& f : doc.fits) fits.push_back(fit_json(f));
  json constants = json::array();
  for (const auto& c : doc.constants) constants.push_back({{"label", c.label}, {"value", num(c.value)}});
  json checks = json::array();
  for (const auto& c : doc.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  json meta = {{"tool_version", doc.metadata.tool_version}};
  if (include_runtime) {
    grid["timestamp"] = doc.grid.timestamp;
    meta["timestamp"] = doc.metadata.timestamp;
    meta["runtime_seconds"] = num(doc.metadata.runtime_seconds);
  }
  json out = {{"config", config_json(doc.config)},
              {"grid", grid},
              {"fits", fits},
              {"constants", constants},
              {"checks", checks},
              {"metadata", meta}};
  return out.dump(2) + "\n";
}

ReportDocument parse_report_json(std::string_view text) {
  const json j = json::parse(text);
  ReportDocument doc;
  doc.config = config_from(j.at("config"));
  const json& grid = j.at("grid");
  for (const auto& s : grid.at("samples")) doc.grid.samples.push_back(sample_from(s));
  doc.grid.seed = grid.at("seed").get<std::uint64_t>();
  doc.grid.quadrature_exactness = grid.at("quadrature_exactness").get<int>();
  doc.grid.timestamp = grid.value("timestamp", "");
  for (const auto& f : j.at("fits")) doc.fits.push_back(fit_from(f));
  for (const auto& c : j.at("constants")) doc.constants.push_back({c.at("label").get<std::string>(), denum(c.at("value"))});
  for (const auto& c : j.at("checks")) {
    doc.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(), c.at("detail").get<std::string>()});
  }
  const json& meta = j.at("metadata");
  doc.metadata.tool_version = meta.at("tool_version").get<std::string>();
  doc.metadata.timestamp = meta.value("timestamp", "");
  doc.metadata.runtime_seconds = meta.contains("runtime_seconds") ? denum(meta.at("runtime_seconds")) : 0.0;
  return doc;
}

std::string to_csv(const ReportDocument& doc) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& s : doc.grid.samples) {
    auto family = [&](std::size_t i) { return i < s.families.size() ? s.families[i] : std::string(); };
    auto degree = [&](std::size_t i) { return i < s.degrees.size() ? g12(s.degrees[i]) : std::string(); };
    os << doc.config.study << ',' << s.dimension << ',' << family(0) << ',' << family(1) << ',' << family(2) << ','
       << degree(0) << ',' << degree(1) << ',' << degree(2) << ',' << format_exponent(s.lebesgue_r) << ','
       << g12(s.ratio) << ',' << g12(s.bound) << ',' << g12(s.ratio_over_bound()) << '\n';
  }
  return os.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw ReportWriteError("cannot create " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ReportWriteError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ReportWriteError("short write to " + path.string());
}

std::filesystem::path write_report(const ReportDocument& doc, const std::filesystem::path& dir,
                                   const std::string& format) {
  if (format != "csv" && format != "json") throw std::invalid_argument("format must be csv or json");
  const auto path = dir / (doc.config.study + "." + format);
  write_file(path, format == "csv" ? to_csv(doc) : to_json(doc));
  return path;
}

}  // namespace sphlab

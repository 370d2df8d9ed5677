#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sphlab {

/// Invalid configuration. field() names the offending key, line() is 1-based
/// (0 when the problem is not tied to a line of a file).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, int line, const std::string& message);
  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  std::string field_;
  int line_;
};

struct ExperimentConfig {
  std::string study;
  int dimension = 2;
  std::string family_f = "highest-weight";
  std::string family_g = "highest-weight";
  std::string family_h;              // empty for bilinear grids
  std::string degrees = "8..64";     // "a..b" doubles from a to b, or "a,b,c"
  std::string partner = "same";      // second degree: same | scale:K | fixed:N
  std::string third;                 // third degree: scale-sum:K | fixed:N | same
  std::vector<double> lebesgue_r{2.0};
  std::uint64_t seed = 0;
  int quadrature_margin = 2;
  std::size_t node_budget = 20'000'000;
  int draws = 64;
  int starts = 8;
  double tol = 1e-10;
  int max_iters = 500;
  std::string output_dir = "results";
  std::string format = "csv";
  bool plot = false;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Names accepted by run_study.
const std::vector<std::string>& study_names();

/// Defaults for a study; throws ConfigError on an unknown name.
ExperimentConfig default_config(std::string_view study);

/// Applies `key = value` lines (with # comments) on top of base, then validates.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base);
ExperimentConfig load_config(const std::string& path, ExperimentConfig base);

/// Throws ConfigError naming the first invalid field.
void validate(const ExperimentConfig& cfg);

/// The degree grid, partner and third rules resolved to integers.
std::vector<int> degree_grid(const ExperimentConfig& cfg);
int partner_degree(const ExperimentConfig& cfg, int degree);
int third_degree(const ExperimentConfig& cfg, int first, int second);

/// Text form of an r value: "inf" or %.12g.
std::string format_exponent(double r);

}  // namespace sphlab

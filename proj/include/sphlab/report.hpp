#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sphlab/config.hpp"
#include "sphlab/experiments.hpp"

namespace sphlab {

struct NamedFit {
  std::string label;
  std::string abscissa;  // min_degree | max_degree | first_degree | second_degree
  FitResult fit;
  bool operator==(const NamedFit&) const = default;
};

struct NamedValue {
  std::string label;
  double value = 0.0;
  bool operator==(const NamedValue&) const = default;
};

/// A numerical invariant the study verified; a failed check maps to exit status 3.
struct InvariantCheck {
  std::string name;
  bool passed = true;
  std::string detail;
  bool operator==(const InvariantCheck&) const = default;
};

struct RunMetadata {
  std::string tool_version;
  std::string timestamp;  // UTC, ISO 8601
  double runtime_seconds = 0.0;
  bool operator==(const RunMetadata&) const = default;
};

struct ReportDocument {
  ExperimentConfig config;
  ExperimentGrid grid;
  std::vector<NamedFit> fits;
  std::vector<NamedValue> constants;
  std::vector<InvariantCheck> checks;
  RunMetadata metadata;

  bool all_checks_passed() const;
  bool operator==(const ReportDocument&) const = default;
};

class ReportWriteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Abscissa parse_abscissa(std::string_view name);
std::string abscissa_name(Abscissa x);

/// Structured form of the document. With include_runtime = false the
/// timestamp and runtime fields are left out, leaving the deterministic payload.
std::string to_json(const ReportDocument& doc, bool include_runtime = true);
ReportDocument parse_report_json(std::string_view text);

inline constexpr std::string_view kCsvHeader =
    "study,d,family_f,family_g,family_h,p,q,k,lebesgue_r,ratio,bound,ratio_over_bound";

std::string to_csv(const ReportDocument& doc);

/// Writes <dir>/<study>.<format>; returns the path.
std::filesystem::path write_report(const ReportDocument& doc, const std::filesystem::path& dir,
                                   const std::string& format);

/// Writes bytes to path, creating parent directories.
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace sphlab

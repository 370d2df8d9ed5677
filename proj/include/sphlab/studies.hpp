#pragma once

#include <string>

#include "sphlab/config.hpp"
#include "sphlab/report.hpp"

namespace sphlab {

inline constexpr const char* kToolVersion = "0.1.0";

/// Runs a validated config. Throws ConfigError for inputs the study cannot
/// use and BudgetExceeded when a grid is too large. Failed numerical
/// invariants are recorded in the returned document's checks.
ReportDocument run_study(const ExperimentConfig& cfg);

/// Exit status for a finished document: 0 when every check passed, else 3.
int exit_status(const ReportDocument& doc);

/// One-screen text summary (fits, constants, checks).
std::string summary(const ReportDocument& doc);

}  // namespace sphlab

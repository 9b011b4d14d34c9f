#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symgeo/optimize.hpp"
#include "symgeo/verify.hpp"

namespace symgeo {

inline constexpr int kReportSchema = 1;

/// Library version string, e.g. "0.1.0".
const char* library_version() noexcept;

/// Provenance embedded in every report. Wall time is only written when set,
/// since it would break byte-for-byte reproducibility.
struct RunInfo {
  std::string tool = "symgeo";
  std::string version = library_version();
  std::vector<std::pair<std::string, std::string>> config;
  std::uint64_t seed = 0;
  std::optional<double> wall_seconds;
};

/// 17 significant digits, '.' decimal separator regardless of locale.
std::string format_double(double x);
/// Shortest string that parses back to x, e.g. "1e-12". Used for config echoes.
std::string format_shortest(double x);

std::string eg_report_json(const EgReport& report, const RunInfo& info);
/// Header line plus one data row.
std::string eg_report_csv(const EgReport& report, const RunInfo& info);

std::string verification_report_json(const VerificationReport& report, const RunInfo& info);
/// e.g. "[PASS] symmetric_restriction: 50 instances, worst 3.1e-09 <= tol 1e-06"
std::string verification_summary(const VerificationReport& report);

/// Columns i,alpha,beta,theta_i,overlap_i. alpha/beta are 0-based party
/// indices and empty on the final row.
std::string trace_csv(const SymmetrizationTrace& trace);
std::string trace_json(const SymmetrizeResult& result, const RunInfo& info);

}  // namespace symgeo

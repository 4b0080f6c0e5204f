#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "run_config.hpp"
#include "suites.hpp"

namespace qdilog::cli {

/// Bumped whenever a field of the JSON report changes meaning.
inline constexpr int report_schema_version = 1;

/// Column order of verify reports in CSV.
inline const std::vector<std::string> csv_columns{
    "suite", "index", "status", "inputs", "deviation", "tolerance", "lhs_re", "lhs_im",
    "rhs_re", "rhs_im", "error_estimate", "detail",
};

/// One row of `eval`.
struct EvalRow {
    std::string what;
    std::string input;
    std::optional<std::complex<double>> value;
    std::optional<double> error_estimate;
    /// Empty, or the reason the value is missing (e.g. pole-proximity).
    std::string flag;
};

std::string render_verify(const std::vector<SuiteResult>& results, const RunConfig& cfg,
                          const std::string& timestamp, int exit_code);
std::string render_eval(const std::vector<EvalRow>& rows, const RunConfig& cfg, const std::string& timestamp);

/// UTC time in ISO 8601.
std::string utc_timestamp();

} // namespace qdilog::cli

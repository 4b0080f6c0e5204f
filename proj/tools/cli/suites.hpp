#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "run_config.hpp"

namespace qdilog::cli {

/// One row of a verify report.
struct CaseRow {
    std::size_t index = 0;
    std::vector<std::pair<std::string, std::string>> inputs;
    /// pass, fail, error or unsupported.
    std::string status = "pass";
    std::optional<std::complex<double>> lhs;
    std::optional<std::complex<double>> rhs;
    std::optional<double> deviation;
    std::optional<double> error_estimate;
    std::string detail;
    double wall_seconds = 0;
};

struct SuiteResult {
    std::string suite;
    /// pass, fail or unsupported (the whole suite could not run).
    std::string status = "pass";
    std::string reason;
    /// Empty for exact suites.
    std::optional<double> tolerance;
    std::vector<CaseRow> cases;
};

/// Raised when a suite cannot run for the configured parameters.
struct UnsupportedSuite {
    std::string reason;
};

/// Pass threshold of a suite after applying the `tol` override.
std::optional<double> suite_tolerance(const std::string& suite, const RunConfig& cfg);

/// Runs one suite. Cases are evaluated on up to worker_count() threads and
/// returned in case order.
SuiteResult run_suite(const std::string& suite, const RunConfig& cfg);

/// Expands "all" and validates names; throws std::invalid_argument.
std::vector<std::string> resolve_suites(const std::vector<std::string>& requested, const RunConfig& cfg);

/// 0 pass, 1 numeric failure, 2 unsupported configuration.
int exit_code(const std::vector<SuiteResult>& results);

} // namespace qdilog::cli

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qdilog {

enum class ErrorKind {
    invalid_parameter,
    pole_proximity,
    convergence_failure,
    degenerate_parameter,
    oracle_unavailable,
    tail_non_decaying,
    unsupported_configuration,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::invalid_parameter: return "invalid_parameter";
    case ErrorKind::pole_proximity: return "pole_proximity";
    case ErrorKind::convergence_failure: return "convergence_failure";
    case ErrorKind::degenerate_parameter: return "degenerate_parameter";
    case ErrorKind::oracle_unavailable: return "oracle_unavailable";
    case ErrorKind::tail_non_decaying: return "tail_non_decaying";
    case ErrorKind::unsupported_configuration: return "unsupported_configuration";
    }
    return "unknown";
}

/// Single exception type for the library; `kind()` says what went wrong.
/// Convergence failures also carry the error estimate that was reached.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, double achieved_error = 0.0)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what)
        , kind_(kind)
        , achieved_error_(achieved_error)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }
    double achieved_error() const noexcept { return achieved_error_; }

private:
    ErrorKind kind_;
    double achieved_error_;
};

} // namespace qdilog

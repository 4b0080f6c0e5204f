#pragma once

#include <string_view>

#include "qdilog/errors.hpp"

namespace qdilog {

enum class Precision { binary64, extended };

constexpr std::string_view to_string(Precision p) noexcept
{
    return p == Precision::binary64 ? "standard" : "extended";
}

/// Numerical knobs shared by every evaluator.
///
/// `rel_tol` is the relative accuracy asked of G_b values (equivalently the
/// absolute accuracy of log G_b) and of contour integrals. `pole_eps` is the
/// distance below which an argument counts as sitting on a pole or zero of
/// G_b. The asymptotic forms replace quadrature once the leading exponential
/// correction drops below `asym_safety * rel_tol`.
struct EvalConfig {
    double rel_tol = 1e-10;
    double abs_floor = 0.0;
    int max_refine = 48;
    double trunc_margin = 2.0;
    Precision precision = Precision::binary64;
    double pole_eps = 1e-10;
    double asym_safety = 1e-4;
};

inline void validate(const EvalConfig& cfg)
{
    if (!(cfg.rel_tol > 0.0))
        throw Error(ErrorKind::invalid_parameter, "rel_tol must be positive");
    if (cfg.max_refine < 1)
        throw Error(ErrorKind::invalid_parameter, "max_refine must be at least 1");
    if (cfg.abs_floor < 0.0 || cfg.trunc_margin < 0.0 || cfg.pole_eps < 0.0 || !(cfg.asym_safety > 0.0))
        throw Error(ErrorKind::invalid_parameter, "abs_floor, trunc_margin and pole_eps must be non-negative");
}

} // namespace qdilog

#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace CLI {
class App;
}

namespace qdilog::cli {

enum class OutputFormat { json, csv, pretty };

/// Inclusive range sampled at `count` evenly spaced points, written lo:hi:count.
struct GridAxis {
    double lo = 0;
    double hi = 0;
    int count = 1;

    std::vector<double> points() const;
    std::string str() const;
    static GridAxis parse(const std::string& text);

    friend bool operator==(const GridAxis&, const GridAxis&) = default;
};

/// Everything a CLI run depends on. Flags override the config file; the
/// struct round-trips through the TOML config format.
struct RunConfig {
    std::complex<double> b{0.8, 0.0};
    double alpha = 0.5;

    // Pass thresholds by tier. `tol` (if positive) replaces all of them.
    double tol = 0;
    double tol_core = 1e-10;
    double tol_integral = 1e-6;
    double tol_six_nine = 1e-5;
    double tol_kac = 1e-5;
    /// rel_tol handed to G_b evaluation; contour integrals run two digits
    /// tighter than their pass threshold.
    double eval_rel_tol = 1e-10;

    /// "default" or "quick": picks the built-in case lists below when they
    /// are left empty.
    std::string grid = "default";
    /// Fractions of Re Q for Re z and absolute values for Im z.
    GridAxis z_re{0.05, 0.95, 10};
    GridAxis z_im{-2.0, 2.0, 10};
    std::vector<double> s;
    std::vector<double> t;
    std::vector<double> p;
    std::vector<double> u;

    std::vector<std::string> suites;
    OutputFormat format = OutputFormat::json;
    std::string out;
    std::uint64_t seed = 20240611;
    bool timing = false;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

std::complex<double> parse_complex(const std::string& text);
std::string format_complex(std::complex<double> z);
std::string to_string(OutputFormat f);

/// The suites known to `verify`, in execution order.
const std::vector<std::string>& suite_names();

/// Binds every RunConfig field to options of `app` (flags and config keys).
void bind_run_config(CLI::App& app, RunConfig& cfg);

/// TOML text that reproduces `cfg` when read back through bind_run_config.
std::string to_toml(const RunConfig& cfg);

/// Parses TOML text produced by to_toml (or written by hand).
RunConfig from_toml(const std::string& text);

/// Worker count: QDILOG_THREADS if set and positive, else the hardware count.
unsigned worker_count();

} // namespace qdilog::cli

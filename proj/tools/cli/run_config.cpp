#include "run_config.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace qdilog::cli {

std::vector<double> GridAxis::points() const
{
    std::vector<double> pts;
    if (count <= 1) {
        pts.push_back(lo);
        return pts;
    }
    for (int i = 0; i < count; ++i)
        pts.push_back(lo + (hi - lo) * i / (count - 1));
    return pts;
}

namespace {

// Shortest text that reads back to the same double.
std::string exact_double(double x)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string list_str(const std::vector<double>& v)
{
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? ", " : "") + exact_double(v[i]);
    return s + "]";
}

} // namespace

std::string GridAxis::str() const
{
    return exact_double(lo) + ":" + exact_double(hi) + ":" + std::to_string(count);
}

GridAxis GridAxis::parse(const std::string& text)
{
    std::istringstream is(text);
    std::string a, b, c;
    if (!std::getline(is, a, ':') || !std::getline(is, b, ':') || !std::getline(is, c))
        throw std::invalid_argument("grid axis must look like lo:hi:count, got '" + text + "'");
    GridAxis g{std::stod(a), std::stod(b), std::stoi(c)};
    if (g.count < 1)
        throw std::invalid_argument("grid axis count must be positive");
    return g;
}

std::complex<double> parse_complex(const std::string& text)
{
    std::string s;
    std::remove_copy_if(text.begin(), text.end(), std::back_inserter(s), [](unsigned char c) { return std::isspace(c); });
    static const std::regex pair_re(R"(^\(([^,]+),([^,]+)\)$)");
    static const std::regex alg_re(R"(^([+-]?[0-9.]+(?:[eE][+-]?[0-9]+)?)?(?:([+-][0-9.]*(?:[eE][+-]?[0-9]+)?)[ij])?$)");
    std::smatch m;
    if (std::regex_match(s, m, pair_re))
        return {std::stod(m[1]), std::stod(m[2])};
    if (!s.empty() && std::regex_match(s, m, alg_re) && (m[1].matched || m[2].matched)) {
        const double re = m[1].matched ? std::stod(m[1]) : 0.0;
        double im = 0.0;
        if (m[2].matched) {
            const std::string t = m[2];
            im = (t == "+" || t == "-") ? (t == "+" ? 1.0 : -1.0) : std::stod(t);
        }
        return {re, im};
    }
    // Pure imaginary without sign, e.g. "0.3i".
    static const std::regex imag_re(R"(^([0-9.]+(?:[eE][+-]?[0-9]+)?)[ij]$)");
    if (std::regex_match(s, m, imag_re))
        return {0.0, std::stod(m[1])};
    throw std::invalid_argument("cannot parse complex number '" + text + "'");
}

std::string format_complex(std::complex<double> z)
{
    if (z.imag() == 0.0)
        return exact_double(z.real());
    return exact_double(z.real()) + (z.imag() < 0 ? "" : "+") + exact_double(z.imag()) + "i";
}

std::string to_string(OutputFormat f)
{
    switch (f) {
    case OutputFormat::json: return "json";
    case OutputFormat::csv: return "csv";
    case OutputFormat::pretty: return "pretty";
    }
    return "json";
}

const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{
        "reflection", "funceq", "product-oracle", "tau-binomial", "six-nine", "theorem31-exact", "q-binomial", "kac",
    };
    return names;
}

void bind_run_config(CLI::App& app, RunConfig& cfg)
{
    app.add_option_function<std::string>(
           "--b", [&cfg](const std::string& v) { cfg.b = parse_complex(v); },
           "Deformation parameter b, e.g. 0.8 or 0.6+0.1i")
        ->default_str(format_complex(cfg.b));
    app.add_option("--alpha", cfg.alpha, "Representation weight alpha")->capture_default_str();
    app.add_option("--tol", cfg.tol, "Pass threshold for every numeric suite (overrides the tiers)");
    app.add_option("--tol-core", cfg.tol_core, "Pass threshold for G_b-level suites")->capture_default_str();
    app.add_option("--tol-integral", cfg.tol_integral, "Pass threshold for single contour integrals")
        ->capture_default_str();
    app.add_option("--tol-six-nine", cfg.tol_six_nine, "Pass threshold for the 6-9 suite")->capture_default_str();
    app.add_option("--tol-kac", cfg.tol_kac, "Pass threshold for the generalized Kac suite")->capture_default_str();
    app.add_option("--eval-rel-tol", cfg.eval_rel_tol, "rel_tol for G_b evaluation")->capture_default_str();
    app.add_option("--grid", cfg.grid, "Built-in case lists: default or quick")
        ->check(CLI::IsMember({"default", "quick"}))
        ->capture_default_str();
    app.add_option_function<std::string>(
           "--z-re", [&cfg](const std::string& v) { cfg.z_re = GridAxis::parse(v); },
           "Re z grid as fractions of Re Q, lo:hi:count")
        ->default_str(cfg.z_re.str());
    app.add_option_function<std::string>(
           "--z-im", [&cfg](const std::string& v) { cfg.z_im = GridAxis::parse(v); }, "Im z grid, lo:hi:count")
        ->default_str(cfg.z_im.str());
    app.add_option("--s", cfg.s, "Values of s (q-binomial, Kac)")->delimiter(',');
    app.add_option("--t", cfg.t, "Values of t (Kac)")->delimiter(',');
    app.add_option("--p", cfg.p, "Values of p (exact K relations use them as rationals)")->delimiter(',');
    app.add_option("--u", cfg.u, "Sample points u for operator symbols")->delimiter(',');
    app.add_option("--suite", cfg.suites, "Suites to run (or 'all')")->delimiter(',');
    app.add_option_function<std::string>(
           "--format",
           [&cfg](const std::string& v) {
               cfg.format = v == "csv" ? OutputFormat::csv : v == "pretty" ? OutputFormat::pretty : OutputFormat::json;
           },
           "Output format")
        ->check(CLI::IsMember({"json", "csv", "pretty"}))
        ->default_str(to_string(cfg.format));
    app.add_option("--out", cfg.out, "Write the report here instead of stdout");
    app.add_option("--seed", cfg.seed, "Seed for pseudo-random parameter tuples")->capture_default_str();
    app.add_flag("--timing", cfg.timing, "Include per-case wall times in the report");
}

std::string to_toml(const RunConfig& cfg)
{
    std::ostringstream os;
    os << "b = \"" << format_complex(cfg.b) << "\"\n";
    os << "alpha = " << exact_double(cfg.alpha) << "\n";
    os << "tol = " << exact_double(cfg.tol) << "\n";
    os << "tol-core = " << exact_double(cfg.tol_core) << "\n";
    os << "tol-integral = " << exact_double(cfg.tol_integral) << "\n";
    os << "tol-six-nine = " << exact_double(cfg.tol_six_nine) << "\n";
    os << "tol-kac = " << exact_double(cfg.tol_kac) << "\n";
    os << "eval-rel-tol = " << exact_double(cfg.eval_rel_tol) << "\n";
    os << "grid = \"" << cfg.grid << "\"\n";
    os << "z-re = \"" << cfg.z_re.str() << "\"\n";
    os << "z-im = \"" << cfg.z_im.str() << "\"\n";
    if (!cfg.s.empty())
        os << "s = " << list_str(cfg.s) << "\n";
    if (!cfg.t.empty())
        os << "t = " << list_str(cfg.t) << "\n";
    if (!cfg.p.empty())
        os << "p = " << list_str(cfg.p) << "\n";
    if (!cfg.u.empty())
        os << "u = " << list_str(cfg.u) << "\n";
    if (!cfg.suites.empty()) {
        os << "suite = [";
        for (std::size_t i = 0; i < cfg.suites.size(); ++i)
            os << (i ? ", " : "") << "\"" << cfg.suites[i] << "\"";
        os << "]\n";
    }
    os << "format = \"" << to_string(cfg.format) << "\"\n";
    if (!cfg.out.empty())
        os << "out = \"" << cfg.out << "\"\n";
    os << "seed = " << cfg.seed << "\n";
    os << "timing = " << (cfg.timing ? "true" : "false") << "\n";
    return os.str();
}

RunConfig from_toml(const std::string& text)
{
    RunConfig cfg;
    CLI::App app;
    bind_run_config(app, cfg);
    std::istringstream is(text);
    app.parse_from_stream(is);
    return cfg;
}

unsigned worker_count()
{
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("QDILOG_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0)
            n = std::min<unsigned>(n, static_cast<unsigned>(v));
    }
    return n;
}

} // namespace qdilog::cli

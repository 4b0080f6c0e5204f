#include "app.hpp"

#include <CLI11.hpp>
#include <qdilog/gb.hpp>

#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include "report.hpp"
#include "run_config.hpp"
#include "suites.hpp"

namespace qdilog::cli {

namespace {

using C = std::complex<double>;

/// Complex literal, or a multiple of Q written "Q", "Q/2", "0.25Q".
C parse_point(const std::string& text, const ModulusParam<double>& m)
{
    static const std::regex q_re(R"(^\s*([0-9.eE+-]*)\s*\*?\s*Q\s*(?:/\s*([0-9.eE+-]+))?\s*$)");
    std::smatch mt;
    if (std::regex_match(text, mt, q_re)) {
        const double k = mt[1].length() ? std::stod(mt[1]) : 1.0;
        const double d = mt[2].matched ? std::stod(mt[2]) : 1.0;
        return m.Q() * (k / d);
    }
    return parse_complex(text);
}

EvalRow eval_point(const std::string& what, const std::string& text, const ModulusParam<double>& m,
                   const EvalConfig& cfg)
{
    EvalRow row;
    row.what = what;
    row.input = text;
    try {
        const C x = parse_point(text, m);
        if (what == "Gb") {
            const auto e = gb_eval_estimate(x, m, cfg);
            row.value = e.value;
            row.error_estimate = e.error;
        } else {
            const C w = small_gb_argument(x, m);
            if (x == C(0) || zero_distance(w, m) < cfg.pole_eps)
                throw Error(ErrorKind::pole_proximity, "g_b has a pole here");
            const auto e = log_gb_estimate(w, m, cfg);
            row.value = std::exp(m.log_zeta_bar() - e.value);
            row.error_estimate = std::abs(*row.value) * e.error;
        }
    } catch (const Error& e) {
        row.flag = e.kind() == ErrorKind::pole_proximity ? "pole-proximity" : std::string(to_string(e.kind()));
    }
    return row;
}

bool write_output(const std::string& text, const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    if (cfg.out.empty()) {
        out << text;
        return true;
    }
    std::ofstream f(cfg.out);
    if (!(f << text)) {
        err << "cannot write " << cfg.out << "\n";
        return false;
    }
    return true;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    CLI::App app{"Quantum dilogarithm G_b: evaluation and identity verification", "qdilog"};
    app.set_config("--config", "", "TOML file with the same keys as the long options");
    app.require_subcommand(1);
    app.fallthrough();
    bind_run_config(app, cfg);

    auto* eval = app.add_subcommand("eval", "Evaluate G_b, g_b or the constant zeta_b");
    std::string what = "Gb";
    std::vector<std::string> points;
    // Near-pole rows are flagged rather than computed at this distance.
    double pole_eps = 1e-3;
    eval->add_option("--what", what, "Gb, gb or zeta")->check(CLI::IsMember({"Gb", "gb", "zeta"}))->capture_default_str();
    eval->add_option("points,--at", points, "Points: complex literals or multiples of Q such as Q/2");
    eval->add_option("--pole-eps", pole_eps, "Distance below which a point counts as a pole")->capture_default_str();

    auto* verify = app.add_subcommand("verify", "Run identity suites and report every case");
    auto* dump = app.add_subcommand("config", "Print the effective configuration as TOML");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        // --help output belongs on stdout.
        app.exit(e, out, err);
        return exit_pass;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    const std::string stamp = utc_timestamp();
    try {
        if (dump->parsed()) {
            out << to_toml(cfg);
            return exit_pass;
        }
        const auto m = make_modulus(cfg.b);
        if (eval->parsed()) {
            EvalConfig ecfg;
            ecfg.rel_tol = cfg.eval_rel_tol;
            ecfg.pole_eps = pole_eps;
            std::vector<EvalRow> rows;
            if (what == "zeta") {
                rows.push_back({"zeta", "b=" + format_complex(cfg.b), m.zeta(), 0.0, ""});
                rows.push_back({"zetabar", "b=" + format_complex(cfg.b), m.zeta_bar(), 0.0, ""});
            } else {
                if (points.empty()) {
                    err << "eval needs at least one point\n";
                    return exit_usage;
                }
                for (const auto& p : points)
                    rows.push_back(eval_point(what, p, m, ecfg));
            }
            return write_output(render_eval(rows, cfg, stamp), cfg, out, err) ? exit_pass : exit_usage;
        }
        if (verify->parsed()) {
            const auto names = resolve_suites(cfg.suites.empty() ? std::vector<std::string>{"all"} : cfg.suites, cfg);
            std::vector<SuiteResult> results;
            for (const auto& name : names) {
                results.push_back(run_suite(name, cfg));
                if (results.back().status == "unsupported" && !results.back().reason.empty())
                    err << name << ": unsupported: " << results.back().reason << "\n";
            }
            const int code = exit_code(results);
            return write_output(render_verify(results, cfg, stamp, code), cfg, out, err) ? code : exit_usage;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_unsupported;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}

} // namespace qdilog::cli

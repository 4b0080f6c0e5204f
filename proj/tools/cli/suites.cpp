#include "suites.hpp"

#include <qdilog/gb.hpp>
#include <qdilog/identities.hpp>
#include <qdilog/operators.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <functional>
#include <random>
#include <stdexcept>
#include <thread>

namespace qdilog::cli {

namespace {

using C = std::complex<double>;
using Inputs = std::vector<std::pair<std::string, std::string>>;

/// A deferred case. `inputs` labels the row if the case throws.
struct Task {
    template <class F>
    Task(F f, Inputs in = {})
        : run(std::move(f))
        , inputs(std::move(in))
    {
    }
    std::function<CaseRow()> run;
    Inputs inputs;
};

std::string num(double x)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

bool quick(const RunConfig& cfg) { return cfg.grid == "quick"; }

EvalConfig core_config(const RunConfig& cfg)
{
    EvalConfig e;
    e.rel_tol = cfg.eval_rel_tol;
    return e;
}

// Contour integrals run two digits tighter than the pass threshold.
EvalConfig integral_config(double tolerance)
{
    EvalConfig e;
    e.rel_tol = tolerance * 1e-2;
    return e;
}

std::vector<C> z_grid(const RunConfig& cfg, const ModulusParam<double>& m)
{
    std::vector<C> pts;
    for (double fr : cfg.z_re.points())
        for (double im : cfg.z_im.points())
            pts.emplace_back(fr * m.Q().real(), im);
    return pts;
}

void judge(CaseRow& row, double tolerance)
{
    row.status = *row.deviation <= tolerance ? "pass" : "fail";
}

/// Runs `tasks` on the worker pool; a qdilog::Error becomes an error or
/// unsupported row instead of aborting the suite.
std::vector<CaseRow> run_tasks(const std::vector<Task>& tasks)
{
    std::vector<CaseRow> rows(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < tasks.size(); k = next++) {
            const auto t0 = std::chrono::steady_clock::now();
            CaseRow row;
            try {
                row = tasks[k].run();
            } catch (const Error& e) {
                row.inputs = tasks[k].inputs;
                const bool unsupported = e.kind() == ErrorKind::unsupported_configuration
                    || e.kind() == ErrorKind::degenerate_parameter || e.kind() == ErrorKind::invalid_parameter
                    || e.kind() == ErrorKind::oracle_unavailable;
                row.status = unsupported ? "unsupported" : "error";
                row.detail = e.what();
            } catch (const std::exception& e) {
                row.inputs = tasks[k].inputs;
                row.status = "error";
                row.detail = e.what();
            }
            row.index = k;
            row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            rows[k] = std::move(row);
        }
    };
    const unsigned n = std::min<std::size_t>(worker_count(), std::max<std::size_t>(tasks.size(), 1));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n; ++i)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();
    return rows;
}

// ---------------------------------------------------------------------------
// Core suites
// ---------------------------------------------------------------------------

std::vector<Task> reflection_tasks(const RunConfig& cfg, double tol)
{
    const auto m = make_modulus(cfg.b);
    const EvalConfig e = core_config(cfg);
    std::vector<Task> tasks;
    for (C z : z_grid(cfg, m))
        tasks.push_back([=] {
            CaseRow row;
            row.inputs = {{"z", format_complex(z)}};
            const auto g1 = gb_eval_estimate(z, m, e);
            const auto g2 = gb_eval_estimate(m.Q() - z, m, e);
            row.lhs = g1.value * g2.value;
            row.rhs = std::exp(pi_v<double> * imag_unit<double> * z * (z - m.Q()));
            row.deviation = relative_deviation(*row.lhs, *row.rhs);
            row.error_estimate = g1.error / std::abs(g1.value) + g2.error / std::abs(g2.value);
            judge(row, tol);
            return row;
        });
    return tasks;
}

std::vector<Task> funceq_tasks(const RunConfig& cfg, double tol)
{
    const auto m = make_modulus(cfg.b);
    const EvalConfig e = core_config(cfg);
    std::vector<Task> tasks;
    for (C z : z_grid(cfg, m))
        tasks.push_back([=] {
            CaseRow row;
            row.inputs = {{"z", format_complex(z)}};
            const C gz = gb_eval(z, m, e);
            double worst = -1;
            // Single shifts, then the general form for (n1, n2) in {0,1,2}^2.
            auto consider = [&](const std::string& what, C lhs, C rhs) {
                const double d = relative_deviation(lhs, rhs);
                if (d > worst) {
                    worst = d;
                    row.lhs = lhs;
                    row.rhs = rhs;
                    row.detail = what;
                }
            };
            const C two_pi_i = 2.0 * pi_v<double> * imag_unit<double>;
            consider("shift b", gb_eval(z + m.b(), m, e), (1.0 - std::exp(two_pi_i * m.b() * z)) * gz);
            consider("shift 1/b", gb_eval(z + m.b_inv(), m, e), (1.0 - std::exp(two_pi_i * m.b_inv() * z)) * gz);
            for (long n1 = 0; n1 <= 2; ++n1)
                for (long n2 = 0; n2 <= 2; ++n2) {
                    const C shifted = gb_eval(z + double(n1) * m.b() + double(n2) * m.b_inv(), m, e);
                    consider("general n1=" + std::to_string(n1) + " n2=" + std::to_string(n2), shifted,
                             func_eq_general(z, n1, n2, m) * gz);
                }
            row.deviation = worst;
            row.detail = "worst relation: " + row.detail;
            judge(row, tol);
            return row;
        });
    return tasks;
}

std::vector<Task> product_oracle_tasks(const RunConfig& cfg, double tol)
{
    const auto m = make_modulus(cfg.b);
    if (!m.products_converge())
        throw UnsupportedSuite{"product representation needs Im(b^2) > 0; b = " + format_complex(cfg.b)};
    const EvalConfig e = core_config(cfg);
    std::vector<Task> tasks;
    for (C z : z_grid(cfg, m))
        tasks.push_back([=] {
            CaseRow row;
            row.inputs = {{"z", format_complex(z)}};
            const auto g = gb_eval_estimate(z, m, e);
            row.lhs = g.value;
            row.rhs = gb_product_oracle(z, m, e);
            row.error_estimate = g.error / std::abs(g.value);
            row.deviation = relative_deviation(*row.lhs, *row.rhs);
            judge(row, tol);
            return row;
        });
    return tasks;
}

// ---------------------------------------------------------------------------
// Contour-integral suites
// ---------------------------------------------------------------------------

std::string checks_summary(const std::vector<ConsistencyCheck<double>>& checks, bool& ok)
{
    std::string s;
    for (const auto& c : checks) {
        ok = ok && c.pass;
        s += (s.empty() ? "" : "; ") + c.kind + (c.pass ? " ok" : " FAILED") + " (dev " + num(c.deviation) + ")";
    }
    return s;
}

CaseRow identity_row(const IdentityReport<double>& r)
{
    CaseRow row;
    for (const auto& [k, v] : r.inputs)
        row.inputs.emplace_back(k, format_complex(v));
    row.lhs = r.integral;
    row.rhs = r.closed_form;
    row.deviation = r.rel_deviation;
    row.error_estimate = r.integral_error / std::abs(r.integral);
    bool ok = true;
    row.detail = checks_summary(r.checks, ok);
    row.detail += "; indentations " + std::to_string(r.contour.indentations.size());
    row.status = r.pass && ok ? "pass" : "fail";
    return row;
}

CaseRow operator_row(const OperatorReport<double>& r)
{
    CaseRow row;
    for (const auto& [k, v] : r.inputs)
        row.inputs.emplace_back(k, format_complex(v));
    bool ok = r.pass;
    for (const auto& [what, good] : r.exact_checks)
        if (!good)
            row.detail += (row.detail.empty() ? "" : "; ") + what + " FAILED";
    double worst = -1;
    for (const auto& c : r.cases) {
        row.inputs.emplace_back("u", num(c.u));
        if (c.rel_deviation > worst) {
            worst = c.rel_deviation;
            row.lhs = c.expected;
            row.rhs = c.integral;
            row.error_estimate = c.integral_error / std::abs(c.integral);
        }
        const std::string s = checks_summary(c.checks, ok);
        row.detail += (row.detail.empty() ? "" : "; ") + s;
    }
    row.deviation = worst;
    row.status = ok ? "pass" : "fail";
    return row;
}

std::vector<Task> tau_binomial_tasks(const RunConfig& cfg, double tol)
{
    const auto m = make_modulus(cfg.b);
    const EvalConfig e = integral_config(tol);
    const IdentityOptions opt{tol, true};
    // alpha, beta = k Q / 12 keeps Re alpha, Re beta > 0 and Re(alpha + beta) < Re Q.
    const std::vector<int> ks = quick(cfg) ? std::vector<int>{2, 4} : std::vector<int>{1, 2, 3, 4, 5};
    std::vector<Task> tasks;
    for (int ka : ks)
        for (int kb : ks)
            tasks.push_back([=] {
                const C a = m.Q() * (ka / 12.0);
                const C bb = m.Q() * (kb / 12.0);
                return identity_row(tau_binomial_check(a, bb, m, e, opt));
            });
    return tasks;
}

std::vector<double> or_default(const std::vector<double>& v, std::vector<double> fallback)
{
    return v.empty() ? fallback : v;
}

/// The 6-9 tuple that the generalized Kac integral reduces to.
std::array<C, 4> kac_tuple(const ModulusParam<double>& m, double s, double t, double alpha, double u)
{
    const auto red = kac_six_nine_reduction();
    Bindings<double> env{{"bs", m.b() * s}, {"bt", m.b() * t}, {"alpha", C(alpha)}, {"u", C(u)}, {"Q", m.Q()}};
    return {red.A.evaluate(env), red.B.evaluate(env), red.C.evaluate(env), red.D.evaluate(env)};
}

std::vector<Task> six_nine_tasks(const RunConfig& cfg, double tol)
{
    const auto m = make_modulus(cfg.b);
    const EvalConfig e = integral_config(tol);
    const IdentityOptions opt{tol, true};
    auto tuples = six_nine_tuples(m, quick(cfg) ? 2 : 10, cfg.seed);
    const double s = or_default(cfg.s, {0.3}).front();
    const double t = or_default(cfg.t, {0.2}).front();
    const double u = or_default(cfg.u, {0.1}).front();
    tuples.push_back(kac_tuple(m, s, t, cfg.alpha, u));
    std::vector<Task> tasks;
    for (const auto& tp : tuples)
        tasks.push_back([=] { return identity_row(six_nine_check(tp[0], tp[1], tp[2], tp[3], m, e, opt)); });
    return tasks;
}

CaseRow exact_row(const std::vector<ExactReport>& reports, Inputs inputs)
{
    CaseRow row;
    row.inputs = std::move(inputs);
    std::size_t compared = 0;
    for (const auto& r : reports)
        for (const auto& [what, d] : r.comparisons) {
            ++compared;
            if (!d.equal) {
                row.status = "fail";
                row.detail += (row.detail.empty() ? "" : "; ") + r.relation + ": " + what;
            }
        }
    if (row.detail.empty())
        row.detail = std::to_string(compared) + " exact comparisons equal";
    return row;
}

std::vector<Task> exact_tasks(const RunConfig& cfg)
{
    std::vector<Task> tasks;
    tasks.push_back([] {
        return exact_row({verify_KK(), verify_KE(), verify_KF(), verify_EE(), verify_FF()}, {{"parameters", "symbolic"}});
    });
    // Seeded rational values; each parameter is r b, so p1 = 3/4 means b p1 = (3/4) b.
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<int> numer(-24, 24), denom(1, 12);
    auto draw = [&] {
        int n = numer(rng);
        if (n == 0)
            n = 1;
        return Rational(n, denom(rng));
    };
    const int count = quick(cfg) ? 2 : 10;
    for (int k = 0; k < count; ++k) {
        std::array<Rational, 6> r;
        for (auto& x : r)
            x = draw();
        tasks.push_back([r] {
            auto at = [](const Rational& x) { return gen("b", GaussianRational(x)); };
            Inputs in;
            const char* names[] = {"p1", "p2", "s1", "s2", "t1", "t2"};
            for (std::size_t i = 0; i < r.size(); ++i)
                in.emplace_back(names[i], r[i].str());
            return exact_row({verify_KK(at(r[0]), at(r[1])), verify_KE(at(r[0]), at(r[2])),
                              verify_KF(at(r[1]), at(r[4])), verify_EE(at(r[2]), at(r[3])),
                              verify_FF(at(r[4]), at(r[5]))},
                             in);
        });
    }
    return tasks;
}

std::vector<Task> q_binomial_tasks(const RunConfig& cfg, double tol)
{
    const auto m = make_modulus(cfg.b);
    const EvalConfig e = integral_config(tol);
    const IdentityOptions opt{tol, true};
    const auto ss = or_default(cfg.s, quick(cfg) ? std::vector<double>{0.4} : std::vector<double>{0.4, 0.7});
    const auto us = or_default(cfg.u, quick(cfg) ? std::vector<double>{0.1} : std::vector<double>{0.1, -0.2});
    std::vector<Task> tasks;
    for (double s : ss)
        for (double u : us)
            tasks.emplace_back([=] { return operator_row(q_binomial_E(s, cfg.alpha, std::vector<double>{u}, m, e, opt)); },
                               Inputs{{"s", num(s)}, {"u", num(u)}});
    return tasks;
}

std::vector<Task> kac_tasks(const RunConfig& cfg, double tol)
{
    const auto m = make_modulus(cfg.b);
    const EvalConfig e = integral_config(tol);
    const IdentityOptions opt{tol, true};
    const bool q = quick(cfg);
    const auto ss = or_default(cfg.s, q ? std::vector<double>{0.3} : std::vector<double>{0.3, 0.5});
    const auto ts = or_default(cfg.t, q ? std::vector<double>{0.2} : std::vector<double>{0.2, 0.35});
    const auto us = or_default(cfg.u, q ? std::vector<double>{0.1} : std::vector<double>{0.1, -0.15});
    std::vector<Task> tasks;
    for (double s : ss)
        for (double t : ts)
            for (double u : us)
                tasks.emplace_back(
                    [=] { return operator_row(kac_verify(s, t, cfg.alpha, std::vector<double>{u}, m, e, opt)); },
                    Inputs{{"s", num(s)}, {"t", num(t)}, {"u", num(u)}});
    return tasks;
}

} // namespace

std::optional<double> suite_tolerance(const std::string& suite, const RunConfig& cfg)
{
    if (suite == "theorem31-exact")
        return std::nullopt;
    if (cfg.tol > 0)
        return cfg.tol;
    if (suite == "reflection" || suite == "funceq" || suite == "product-oracle")
        return cfg.tol_core;
    if (suite == "tau-binomial" || suite == "q-binomial")
        return cfg.tol_integral;
    if (suite == "six-nine")
        return cfg.tol_six_nine;
    if (suite == "kac")
        return cfg.tol_kac;
    throw std::invalid_argument("unknown suite '" + suite + "'");
}

SuiteResult run_suite(const std::string& suite, const RunConfig& cfg)
{
    SuiteResult out;
    out.suite = suite;
    out.tolerance = suite_tolerance(suite, cfg);
    const double tol = out.tolerance.value_or(0.0);
    std::vector<Task> tasks;
    try {
        if (suite == "reflection")
            tasks = reflection_tasks(cfg, tol);
        else if (suite == "funceq")
            tasks = funceq_tasks(cfg, tol);
        else if (suite == "product-oracle")
            tasks = product_oracle_tasks(cfg, tol);
        else if (suite == "tau-binomial")
            tasks = tau_binomial_tasks(cfg, tol);
        else if (suite == "six-nine")
            tasks = six_nine_tasks(cfg, tol);
        else if (suite == "theorem31-exact")
            tasks = exact_tasks(cfg);
        else if (suite == "q-binomial")
            tasks = q_binomial_tasks(cfg, tol);
        else if (suite == "kac")
            tasks = kac_tasks(cfg, tol);
        else
            throw std::invalid_argument("unknown suite '" + suite + "'");
    } catch (const UnsupportedSuite& u) {
        out.status = "unsupported";
        out.reason = u.reason;
        return out;
    } catch (const Error& e) {
        out.status = "unsupported";
        out.reason = e.what();
        return out;
    }
    out.cases = run_tasks(tasks);
    bool any_fail = false, any_unsupported = false;
    for (const auto& c : out.cases) {
        any_fail = any_fail || c.status == "fail" || c.status == "error";
        any_unsupported = any_unsupported || c.status == "unsupported";
    }
    out.status = any_fail ? "fail" : any_unsupported ? "unsupported" : "pass";
    if (out.cases.empty()) {
        out.status = "unsupported";
        out.reason = "no cases";
    }
    return out;
}

std::vector<std::string> resolve_suites(const std::vector<std::string>& requested, const RunConfig& cfg)
{
    std::vector<std::string> out;
    for (const auto& name : requested) {
        if (name == "all") {
            for (const auto& s : suite_names())
                if (s != "product-oracle" || make_modulus(cfg.b).products_converge())
                    out.push_back(s);
            continue;
        }
        if (std::find(suite_names().begin(), suite_names().end(), name) == suite_names().end())
            throw std::invalid_argument("unknown suite '" + name + "'");
        out.push_back(name);
    }
    if (out.empty())
        throw std::invalid_argument("no suite selected");
    return out;
}

int exit_code(const std::vector<SuiteResult>& results)
{
    bool unsupported = false;
    for (const auto& r : results) {
        if (r.status == "fail")
            return 1;
        unsupported = unsupported || r.status == "unsupported";
    }
    return unsupported ? 2 : 0;
}

} // namespace qdilog::cli

#pragma once

#include <chrono>
#include <complex>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qdilog/contour.hpp"
#include "qdilog/exact.hpp"
#include "qdilog/gb.hpp"
#include "qdilog/symbol.hpp"

namespace qdilog {

/// Integral side against closed-form side of one identity instance.
template <class Real>
struct IdentityReport {
    std::string identity;
    std::vector<std::pair<std::string, Complex<Real>>> inputs;
    Complex<Real> integral;
    Real integral_error = 0;
    Complex<Real> closed_form;
    Real closed_form_error = 0;
    Real abs_deviation = 0;
    Real rel_deviation = 0;
    Real tolerance = 0;
    bool pass = false;
    ContourSpec<Real> contour;
    std::vector<Pole<Real>> poles;
    std::vector<ConsistencyCheck<Real>> checks;
    std::size_t evaluations = 0;
    double wall_seconds = 0;

    bool checks_pass() const
    {
        for (const auto& c : checks)
            if (!c.pass)
                return false;
        return true;
    }
};

struct IdentityOptions {
    double tolerance = 1e-6;
    bool consistency_checks = true;
};

namespace detail {

template <class Real>
void finish_report(IdentityReport<Real>& r, const CompiledIntegrand<Real>& f, const ContourResult<Real>& res,
                   const EvalConfig& cfg, const IdentityOptions& opt)
{
    r.integral = res.value;
    r.integral_error = res.error;
    r.contour = res.contour;
    r.evaluations = res.evaluations;
    r.abs_deviation = std::abs(r.integral - r.closed_form);
    r.rel_deviation = r.abs_deviation / std::abs(r.closed_form);
    r.tolerance = static_cast<Real>(opt.tolerance);
    r.pass = r.rel_deviation <= r.tolerance;
    if (opt.consistency_checks) {
        r.checks.push_back(check_contour_independence(f, res, cfg));
        r.checks.push_back(check_truncation_doubling(f, res, cfg));
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// Tau-binomial integral
// ---------------------------------------------------------------------------

/// e^{-2 pi beta x} G_b(alpha + i x) / G_b(Q + i x) in x = btau.
inline IntegrandSpec tau_binomial_integrand()
{
    IntegrandSpec s;
    s.variable = "btau";
    s.gauss = GaussExponent::product(gen("beta"), gen("btau"), -2);
    s.factors.add(gen("alpha") + gen("btau", GaussianRational::i()), 1);
    s.factors.add(gen("Q") + gen("btau", GaussianRational::i()), -1);
    return s;
}

/// Integral over the value x = b tau of the generator against
/// G_b(alpha) G_b(beta) / G_b(alpha + beta). Converges for Re alpha, Re beta > 0
/// and Re(alpha + beta) < Re Q.
template <class Real>
IdentityReport<Real> tau_binomial_check(Complex<Real> alpha, Complex<Real> beta, const ModulusParam<Real>& m,
                                        const EvalConfig& cfg, const IdentityOptions& opt = {})
{
    const auto t0 = std::chrono::steady_clock::now();
    IdentityReport<Real> r;
    r.identity = "tau-binomial";
    r.inputs = {{"alpha", alpha}, {"beta", beta}};
    const auto spec = tau_binomial_integrand();
    Bindings<Real> env{{"alpha", alpha}, {"beta", beta}, {"Q", m.Q()}};
    const EvalConfig inner = inner_config(cfg);

    const auto ga = gb_eval_estimate(alpha, m, inner);
    const auto gbeta = gb_eval_estimate(beta, m, inner);
    const auto gab = gb_eval_estimate(alpha + beta, m, inner);
    r.closed_form = ga.value * gbeta.value / gab.value;
    r.closed_form_error = std::abs(r.closed_form)
        * (ga.error / std::abs(ga.value) + gbeta.error / std::abs(gbeta.value) + gab.error / std::abs(gab.value));

    const CompiledIntegrand<Real> f(spec, env, m, inner);
    r.poles = locate_poles(spec, env, m);
    const auto res = integrate_contour(f, plan_contour(r.poles, cfg), cfg);
    detail::finish_report(r, f, res, cfg, opt);
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

// ---------------------------------------------------------------------------
// 6-9 identity
// ---------------------------------------------------------------------------

/// e^{2 pi i tau^2 - 2 pi D tau} G(A+i tau) G(B+i tau) G(C+i tau) G(D-i tau) G(-i tau)
/// / G(A+B+C+D+i tau).
inline IntegrandSpec six_nine_integrand()
{
    const GaussianRational i = GaussianRational::i();
    IntegrandSpec s;
    s.variable = "tau";
    s.gauss = GaussExponent::product(gen("tau"), gen("tau"), 2 * i) + GaussExponent::product(gen("D"), gen("tau"), -2);
    const AffineForm it = gen("tau", i);
    s.factors.add(gen("A") + it).add(gen("B") + it).add(gen("C") + it);
    s.factors.add(gen("D") - it).add(-it);
    s.factors.add(gen("A") + gen("B") + gen("C") + gen("D") + it, -1);
    return s;
}

/// Six-over-three product side of the 6-9 identity as exact factors.
inline FactorSet six_nine_closed_form(const AffineForm& A, const AffineForm& B, const AffineForm& C,
                                      const AffineForm& D)
{
    FactorSet fs;
    fs.add(A).add(B).add(C).add(A + D).add(B + D).add(C + D);
    fs.add(A + B + D, -1).add(A + C + D, -1).add(B + C + D, -1);
    return fs;
}

template <class Real>
IdentityReport<Real> six_nine_check(Complex<Real> A, Complex<Real> B, Complex<Real> C, Complex<Real> D,
                                    const ModulusParam<Real>& m, const EvalConfig& cfg,
                                    const IdentityOptions& opt = {1e-5, true})
{
    const auto t0 = std::chrono::steady_clock::now();
    IdentityReport<Real> r;
    r.identity = "six-nine";
    r.inputs = {{"A", A}, {"B", B}, {"C", C}, {"D", D}};
    Bindings<Real> env{{"A", A}, {"B", B}, {"C", C}, {"D", D}, {"Q", m.Q()}};
    const EvalConfig inner = inner_config(cfg);

    const auto closed = evaluate_factors(six_nine_closed_form(gen("A"), gen("B"), gen("C"), gen("D")), env, m, inner);
    r.closed_form = closed.value;
    r.closed_form_error = std::abs(closed.value) * closed.error;

    const auto spec = six_nine_integrand();
    const CompiledIntegrand<Real> f(spec, env, m, inner);
    r.poles = locate_poles(spec, env, m);
    const auto res = integrate_contour(f, plan_contour(r.poles, cfg), cfg);
    detail::finish_report(r, f, res, cfg, opt);
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

/// Seed of the pseudo-random 6-9 parameter tuples.
inline constexpr std::uint64_t six_nine_seed = 20240611;

/// Generic 6-9 tuples: Re A, B, C in [0.05, 0.25] Re Q, Re D in
/// [0.05 Re Q, 0.8 (Re Q - Re(A+B+C))], imaginary parts in [-0.2, 0.2].
template <class Real>
std::vector<std::array<Complex<Real>, 4>> six_nine_tuples(const ModulusParam<Real>& m, std::size_t count,
                                                          std::uint64_t seed = six_nine_seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto between = [&](Real lo, Real hi) { return lo + (hi - lo) * static_cast<Real>(unit(rng)); };
    const Real q = m.Q().real();
    std::vector<std::array<Complex<Real>, 4>> out;
    while (out.size() < count) {
        std::array<Complex<Real>, 4> t;
        Real sum = 0;
        for (int k = 0; k < 3; ++k) {
            const Real re = between(Real(0.05) * q, Real(0.25) * q);
            t[k] = {re, between(Real(-0.2), Real(0.2))};
            sum += re;
        }
        t[3] = {between(Real(0.05) * q, Real(0.8) * (q - sum)), between(Real(-0.2), Real(0.2))};
        out.push_back(t);
    }
    return out;
}

} // namespace qdilog

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "qdilog/config.hpp"
#include "qdilog/errors.hpp"
#include "qdilog/modulus.hpp"
#include "qdilog/numeric.hpp"
#include "qdilog/quadrature.hpp"

namespace qdilog {

// ---------------------------------------------------------------------------
// Pole and zero lattices
// ---------------------------------------------------------------------------

/// Distance from w to the nearest point n1*b + n2/b with n1, n2 >= 0.
template <class Real>
Real lattice_distance(Complex<Real> w, const ModulusParam<Real>& m)
{
    const Complex<Real> b = m.b();
    const Complex<Real> binv = m.b_inv();
    const Real reach = std::abs(w) + std::abs(b) + std::abs(binv);
    const long n1_max = static_cast<long>(reach / b.real()) + 1;
    const Real binv_norm2 = std::norm(binv);
    Real best = std::numeric_limits<Real>::infinity();
    for (long n1 = 0; n1 <= n1_max; ++n1) {
        const Complex<Real> rest = w - Real(n1) * b;
        // Least-squares multiple of 1/b, then its integer neighbours.
        const Real proj = (rest * std::conj(binv)).real() / binv_norm2;
        const long centre = std::max<long>(0, std::lround(proj));
        for (long n2 = std::max<long>(0, centre - 1); n2 <= centre + 1; ++n2)
            best = std::min(best, std::abs(rest - Real(n2) * binv));
    }
    return best;
}

/// Distance from z to the nearest pole -n1*b - n2/b of G_b.
template <class Real>
Real pole_distance(Complex<Real> z, const ModulusParam<Real>& m)
{
    return lattice_distance(-z, m);
}

/// Distance from z to the nearest zero Q + n1*b + n2/b of G_b.
template <class Real>
Real zero_distance(Complex<Real> z, const ModulusParam<Real>& m)
{
    return lattice_distance(z - m.Q(), m);
}

namespace detail {

/// log(1 - e^x) on some branch, without overflow for large Re x.
template <class Real>
Complex<Real> log_one_minus_exp(Complex<Real> x)
{
    if (x.real() > Real(0))
        return x + std::log(-one_minus_exp(-x));
    return std::log(one_minus_exp(x));
}

template <class Real>
Real tail_tolerance(const EvalConfig& cfg)
{
    return static_cast<Real>(cfg.rel_tol) * std::pow(Real(10), -static_cast<Real>(cfg.trunc_margin));
}

} // namespace detail

// ---------------------------------------------------------------------------
// Integral on the fundamental strip
// ---------------------------------------------------------------------------

/// Perturbations of the strip contour, used by contour-independence and
/// truncation-doubling checks.
struct StripContour {
    double radius_scale = 1.0;
    double truncation_scale = 1.0;
};

/// Radius of the half circle over t = 0. It stays well below the first
/// imaginary-axis poles at 2 pi i b^{+-1}.
template <class Real>
Real default_strip_radius(const ModulusParam<Real>& m)
{
    const Real reach = pi_v<Real> * std::min(m.b().real(), m.b_inv().real());
    return std::min(reach, Real(1)) / Real(4);
}

/// log G_b(z) for 0 < Re z < Re Q from its defining integral.
///
/// The line R + i0 is realized as [-T, -r], the upper half circle of radius r
/// and [r, T]. T follows from the exponential decay of the integrand on each
/// side. The returned error bounds the absolute error of log G_b, which is the
/// relative error of G_b.
template <class Real>
Estimate<Real> log_gb_strip_estimate(Complex<Real> z, const ModulusParam<Real>& m, const EvalConfig& cfg,
                                     const StripContour& contour = {})
{
    validate(cfg);
    const Real x = z.real();
    const Real q_re = m.Q().real();
    if (!(x > Real(0) && x < q_re))
        throw Error(ErrorKind::invalid_parameter, "log_gb_strip: z outside the fundamental strip 0 < Re z < Re Q");

    const Complex<Real> b = m.b();
    const Complex<Real> binv = m.b_inv();
    const Complex<Real> Q = m.Q();
    const Real r = default_strip_radius(m) * static_cast<Real>(contour.radius_scale);

    const Real tail_tol = detail::tail_tolerance<Real>(cfg);
    const Real decades = -std::log(tail_tol);
    const Real t_left = std::max(decades / x, 2 * r + 1) * static_cast<Real>(contour.truncation_scale);
    const Real t_right = std::max(decades / (q_re - x), 2 * r + 1) * static_cast<Real>(contour.truncation_scale);

    auto kernel = [&](Complex<Real> t) -> Complex<Real> {
        if (t.real() <= Real(0))
            return std::exp(z * t) / (t * cexpm1(b * t) * cexpm1(binv * t));
        return std::exp((z - Q) * t) / (t * cexpm1(-b * t) * cexpm1(-binv * t));
    };

    // Panels are graded near the half circle and then cover about one
    // oscillation of e^{i Im(z) t} each.
    const Real step = std::min(Real(2), Real(4) / std::max(Real(1), std::abs(z.imag())));
    auto ray_breaks = [&](Real length) {
        std::vector<Real> pts{r};
        Real t = r;
        while (2 * t < std::min(Real(2), length)) {
            t *= 2;
            pts.push_back(t);
        }
        while (t + step < length) {
            t += step;
            pts.push_back(t);
        }
        pts.push_back(length);
        return pts;
    };

    std::vector<quad::Segment<Real>> path;
    {
        const auto pts = ray_breaks(t_left);
        auto seg = quad::Segment<Real>::line({-t_left, 0}, {-r, 0});
        seg.breaks.clear();
        for (auto it = pts.rbegin(); it != pts.rend(); ++it)
            seg.breaks.push_back((t_left - *it) / (t_left - r));
        seg.breaks.front() = 0;
        seg.breaks.back() = 1;
        path.push_back(std::move(seg));
    }
    path.push_back(quad::Segment<Real>::arc({0, 0}, r, pi_v<Real>, Real(0), 4));
    {
        const auto pts = ray_breaks(t_right);
        auto seg = quad::Segment<Real>::line({r, 0}, {t_right, 0});
        seg.breaks.clear();
        for (Real p : pts)
            seg.breaks.push_back((p - r) / (t_right - r));
        seg.breaks.front() = 0;
        seg.breaks.back() = 1;
        path.push_back(std::move(seg));
    }

    quad::Options<Real> opt;
    opt.rel_tol = 0;
    opt.abs_tol = std::max(static_cast<Real>(cfg.rel_tol) / 4, static_cast<Real>(cfg.abs_floor));
    opt.max_depth = cfg.max_refine;
    auto integral = quad::integrate(path, kernel, opt);

    const Real tail = std::exp(-x * t_left) / (x * t_left) + std::exp(-(q_re - x) * t_right) / ((q_re - x) * t_right);
    Estimate<Real> out;
    out.value = m.log_zeta_bar() - integral.value;
    out.error = integral.error + tail;
    out.abs_integral = integral.abs_integral;
    out.evaluations = integral.evaluations;
    return out;
}

template <class Real>
Complex<Real> log_gb_strip(Complex<Real> z, const ModulusParam<Real>& m, const EvalConfig& cfg)
{
    return log_gb_strip_estimate(z, m, cfg).value;
}

// ---------------------------------------------------------------------------
// Strip reduction through the functional equations
// ---------------------------------------------------------------------------

enum class ReductionOrder { b_first, binv_first };

/// z = z0 + shifts_b * b + shifts_binv / b with G_b(z) = correction * G_b(z0).
template <class Real>
struct StripReduction {
    Complex<Real> z0{};
    long shifts_b = 0;
    long shifts_binv = 0;
    Complex<Real> correction{1, 0};
    /// log(correction) on some branch; exp of it is `correction`.
    Complex<Real> log_correction{};
};

/// Moves z into Re Q/4 <= Re z0 <= 3 Re Q/4 by whole shifts of b and 1/b,
/// accumulating the factors 1 - e^{2 pi i g w} of G_b(w + g) = (1 - e^{2 pi i g w}) G_b(w).
template <class Real>
StripReduction<Real> reduce_to_strip(Complex<Real> z, const ModulusParam<Real>& m,
                                     ReductionOrder order = ReductionOrder::b_first)
{
    const Complex<Real> two_pi_i = Real(2) * pi_v<Real> * imag_unit<Real>;
    const Real centre = m.Q().real() / 2;
    const Real lo = m.Q().real() / 4;
    const Real hi = 3 * m.Q().real() / 4;
    StripReduction<Real> red;
    red.z0 = z;

    auto in_window = [&](Complex<Real> w) { return w.real() >= lo && w.real() <= hi; };
    auto shift_by = [&](bool use_b) {
        const Complex<Real> g = use_b ? m.b() : m.b_inv();
        const long n = std::lround((red.z0.real() - centre) / g.real());
        for (long k = 0; k < n; ++k) {
            const Complex<Real> w = red.z0 - g;
            red.log_correction += detail::log_one_minus_exp(two_pi_i * g * w);
            red.z0 = w;
        }
        for (long k = 0; k < -n; ++k) {
            red.log_correction -= detail::log_one_minus_exp(two_pi_i * g * red.z0);
            red.z0 += g;
        }
        (use_b ? red.shifts_b : red.shifts_binv) += n;
    };

    const bool b_first = order == ReductionOrder::b_first;
    for (int phase = 0; phase < 6 && !in_window(red.z0); ++phase)
        shift_by((phase % 2 == 0) == b_first);
    red.correction = std::exp(red.log_correction);
    return red;
}

// ---------------------------------------------------------------------------
// Asymptotics
// ---------------------------------------------------------------------------

enum class AsymptoticBranch { upper, lower };

/// Leading behaviour of G_b: zeta_bar as Im z -> +inf and
/// zeta e^{pi i z (z - Q)} as Im z -> -inf.
template <class Real>
Complex<Real> gb_asymptotic(Complex<Real> z, const ModulusParam<Real>& m, AsymptoticBranch branch)
{
    if (branch == AsymptoticBranch::upper)
        return m.zeta_bar();
    return m.zeta() * std::exp(pi_v<Real> * imag_unit<Real> * z * (z - m.Q()));
}

template <class Real>
Complex<Real> gb_asymptotic(Complex<Real> z, const ModulusParam<Real>& m)
{
    return gb_asymptotic(z, m, z.imag() >= Real(0) ? AsymptoticBranch::upper : AsymptoticBranch::lower);
}

/// Size of the first exponential correction to the chosen asymptotic form.
template <class Real>
Real asymptotic_correction(Complex<Real> z, const ModulusParam<Real>& m, AsymptoticBranch branch)
{
    const Complex<Real> w = branch == AsymptoticBranch::upper ? z : m.Q() - z;
    const Complex<Real> two_pi_i = Real(2) * pi_v<Real> * imag_unit<Real>;
    return std::abs(std::exp(two_pi_i * m.b() * w)) + std::abs(std::exp(two_pi_i * m.b_inv() * w));
}

// ---------------------------------------------------------------------------
// Evaluation anywhere in the plane
// ---------------------------------------------------------------------------

/// log G_b(z) with an absolute error estimate (the relative error of G_b).
/// At a zero of G_b the value is -inf; at a pole it throws pole_proximity.
template <class Real>
Estimate<Real> log_gb_estimate(Complex<Real> z, const ModulusParam<Real>& m, const EvalConfig& cfg,
                               ReductionOrder order = ReductionOrder::b_first)
{
    const Real eps = static_cast<Real>(cfg.pole_eps);
    if (zero_distance(z, m) < eps)
        return {Complex<Real>(-std::numeric_limits<Real>::infinity(), 0), 0, 0, 0};
    if (pole_distance(z, m) < eps)
        throw Error(ErrorKind::pole_proximity, "G_b evaluated within pole_eps of a pole");

    const auto red = reduce_to_strip(z, m, order);
    const Real roundoff = Real(4) * std::numeric_limits<Real>::epsilon()
        * Real(1 + std::abs(red.shifts_b) + std::abs(red.shifts_binv));
    const Real budget = static_cast<Real>(cfg.asym_safety * cfg.rel_tol);

    const Real upper = asymptotic_correction(red.z0, m, AsymptoticBranch::upper);
    if (upper <= budget)
        return {m.log_zeta_bar() + red.log_correction, upper + roundoff, 0, 0};
    const Real lower = asymptotic_correction(red.z0, m, AsymptoticBranch::lower);
    if (lower <= budget) {
        const Complex<Real> log_asym
            = -m.log_zeta_bar() + pi_v<Real> * imag_unit<Real> * red.z0 * (red.z0 - m.Q());
        return {log_asym + red.log_correction, lower + roundoff, 0, 0};
    }

    auto strip = log_gb_strip_estimate(red.z0, m, cfg);
    strip.value += red.log_correction;
    strip.error += roundoff;
    return strip;
}

template <class Real>
Complex<Real> log_gb(Complex<Real> z, const ModulusParam<Real>& m, const EvalConfig& cfg)
{
    return log_gb_estimate(z, m, cfg).value;
}

/// G_b(z) with an absolute error estimate.
template <class Real>
Estimate<Real> gb_eval_estimate(Complex<Real> z, const ModulusParam<Real>& m, const EvalConfig& cfg,
                                ReductionOrder order = ReductionOrder::b_first)
{
    auto lg = log_gb_estimate(z, m, cfg, order);
    Estimate<Real> out = lg;
    out.value = std::exp(lg.value);
    out.error = std::abs(out.value) * lg.error;
    return out;
}

template <class Real>
Complex<Real> gb_eval(Complex<Real> z, const ModulusParam<Real>& m, const EvalConfig& cfg)
{
    return gb_eval_estimate(z, m, cfg).value;
}

// ---------------------------------------------------------------------------
// Product representation (|q| < 1)
// ---------------------------------------------------------------------------

/// G_b from its infinite products; an oracle independent of the quadrature.
/// Only available when Im(b^2) > 0, where both products converge.
template <class Real>
Complex<Real> gb_product_oracle(Complex<Real> z, const ModulusParam<Real>& m, const EvalConfig& cfg)
{
    if (!m.products_converge())
        throw Error(ErrorKind::oracle_unavailable, "product representation needs Im(b^2) > 0");
    if (pole_distance(z, m) < static_cast<Real>(cfg.pole_eps))
        throw Error(ErrorKind::pole_proximity, "product oracle evaluated at a pole");

    const Complex<Real> two_pi_i = Real(2) * pi_v<Real> * imag_unit<Real>;
    const Complex<Real> b = m.b();
    const Complex<Real> binv = m.b_inv();
    const Real cutoff = static_cast<Real>(cfg.rel_tol) / 10;

    // Successive terms shrink geometrically by |q~^{-2}| and |q^2|.
    auto product = [&](auto term, Real ratio) {
        Complex<Real> log_prod{};
        for (long n = 0; n < 1000000; ++n) {
            const Complex<Real> x = term(n);
            log_prod += detail::log_one_minus_exp(x);
            const Real size = std::abs(std::exp(x));
            if (n > 0 && size / (1 - ratio) < cutoff)
                return log_prod;
        }
        throw Error(ErrorKind::convergence_failure, "product representation did not converge");
    };
    const Real ratio_num = std::abs(std::exp(-two_pi_i * binv * binv));
    const Real ratio_den = std::abs(std::exp(two_pi_i * b * b));
    const Complex<Real> log_num = product([&](long n) { return two_pi_i * binv * (z - Real(n + 1) * binv); }, ratio_num);
    const Complex<Real> log_den = product([&](long n) { return two_pi_i * b * (z + Real(n) * b); }, ratio_den);
    return std::exp(m.log_zeta_bar() + log_num - log_den);
}

// ---------------------------------------------------------------------------
// g_b, the noncompact q-exponential
// ---------------------------------------------------------------------------

template <class Real>
Complex<Real> small_gb_argument(Complex<Real> x, const ModulusParam<Real>& m)
{
    return m.Q() / Real(2) + std::log(x) / (Real(2) * pi_v<Real> * imag_unit<Real> * m.b());
}

/// g_b(x) = zeta_bar / G_b(Q/2 + log(x) / (2 pi i b)), principal branch of log.
template <class Real>
Complex<Real> small_gb(Complex<Real> x, const ModulusParam<Real>& m, const EvalConfig& cfg)
{
    if (x == Complex<Real>(0))
        throw Error(ErrorKind::invalid_parameter, "g_b is not defined at x = 0");
    const Complex<Real> w = small_gb_argument(x, m);
    const Real eps = static_cast<Real>(cfg.pole_eps);
    if (zero_distance(w, m) < eps)
        throw Error(ErrorKind::pole_proximity, "g_b evaluated at a pole (zero of G_b)");
    if (pole_distance(w, m) < eps)
        return {0, 0};
    return std::exp(m.log_zeta_bar() - log_gb(w, m, cfg));
}

/// Product form of g_b, valid for Im(b^2) > 0.
template <class Real>
Complex<Real> small_gb_product(Complex<Real> x, const ModulusParam<Real>& m, const EvalConfig& cfg)
{
    if (!m.products_converge())
        throw Error(ErrorKind::oracle_unavailable, "product form of g_b needs Im(b^2) > 0");
    const Complex<Real> q = m.q();
    const Complex<Real> qt_inv = Real(1) / m.q_tilde();
    const Complex<Real> xt = std::exp(std::log(x) * m.b_inv() * m.b_inv());
    const Real cutoff = static_cast<Real>(cfg.rel_tol) / 10;
    Complex<Real> num{1, 0}, den{1, 0};
    Complex<Real> qn = q;        // q^{2n+1}
    Complex<Real> qtn = qt_inv;  // q~^{-2n-1}
    for (long n = 0; n < 1000000; ++n) {
        const Complex<Real> a = x * qn;
        const Complex<Real> c = xt * qtn;
        num *= Real(1) + a;
        den *= Real(1) + c;
        if (n > 0 && std::abs(a) < cutoff && std::abs(c) < cutoff)
            return num / den;
        qn *= q * q;
        qtn *= qt_inv * qt_inv;
    }
    throw Error(ErrorKind::convergence_failure, "g_b product did not converge");
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

/// G_b(x + n1 b + n2/b) / G_b(x) as a finite product.
template <class Real>
Complex<Real> func_eq_general(Complex<Real> x, long n1, long n2, const ModulusParam<Real>& m)
{
    if (n1 < 0 || n2 < 0)
        throw Error(ErrorKind::invalid_parameter, "func_eq_general needs n1, n2 >= 0");
    const Complex<Real> two_pi_i = Real(2) * pi_v<Real> * imag_unit<Real>;
    const Complex<Real> q2 = m.q() * m.q();
    const Complex<Real> qt2 = m.q_tilde() * m.q_tilde();
    const Complex<Real> eb = std::exp(two_pi_i * m.b() * x);
    const Complex<Real> ebinv = std::exp(two_pi_i * m.b_inv() * x);
    Complex<Real> out{1, 0};
    Complex<Real> qk{1, 0};
    for (long k = 0; k < n1; ++k, qk *= q2)
        out *= Real(1) - qk * eb;
    qk = {1, 0};
    for (long k = 0; k < n2; ++k, qk *= qt2)
        out *= Real(1) - qk * ebinv;
    return out;
}

namespace detail {

template <class Real>
Complex<Real> resonant_product(long n1, long n2, const ModulusParam<Real>& m)
{
    if (n1 < 0 || n2 < 0)
        throw Error(ErrorKind::invalid_parameter, "pole/zero index must be non-negative");
    const Real tiny = Real(1e-12);
    const Complex<Real> q2inv = Real(1) / (m.q() * m.q());
    const Complex<Real> qt2inv = Real(1) / (m.q_tilde() * m.q_tilde());
    Complex<Real> out{1, 0};
    Complex<Real> p = q2inv;
    for (long k = 1; k <= n1; ++k, p *= q2inv) {
        const Complex<Real> f = Real(1) - p;
        if (std::abs(f) < tiny)
            throw Error(ErrorKind::degenerate_parameter, "q^{2k} = 1: resonant b");
        out /= f;
    }
    p = qt2inv;
    for (long k = 1; k <= n2; ++k, p *= qt2inv) {
        const Complex<Real> f = Real(1) - p;
        if (std::abs(f) < tiny)
            throw Error(ErrorKind::degenerate_parameter, "q~^{2k} = 1: resonant b");
        out /= f;
    }
    return out;
}

} // namespace detail

/// lim_{x->0} x G_b(x - n1 b - n2/b).
template <class Real>
Complex<Real> pole_limit(long n1, long n2, const ModulusParam<Real>& m)
{
    return detail::resonant_product(n1, n2, m) / (Real(2) * pi_v<Real>);
}

/// lim_{x->0} x / G_b(x + Q + n1 b + n2/b).
template <class Real>
Complex<Real> zero_limit(long n1, long n2, const ModulusParam<Real>& m)
{
    const Real sign = ((n1 + n2 + 1) % 2 == 0) ? Real(1) : Real(-1);
    const Complex<Real> qpow = std::pow(m.q(), -Real(n1 * (n1 + 1))) * std::pow(m.q_tilde(), -Real(n2 * (n2 + 1)));
    return sign * qpow * detail::resonant_product(n1, n2, m) / (Real(2) * pi_v<Real>);
}

} // namespace qdilog

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qdilog/errors.hpp"
#include "qdilog/numeric.hpp"

namespace qdilog::quad {

/// 21-point Kronrod extension of the 10-point Gauss rule on [-1, 1].
/// Nodes are stored for x >= 0; index 0 is the centre, Gauss nodes sit at odd
/// indices.
template <class Real>
struct GaussKronrod21 {
    std::array<Real, 11> nodes{};
    std::array<Real, 11> kronrod{};
    std::array<Real, 11> gauss{};

    static const GaussKronrod21& instance()
    {
        static const GaussKronrod21 rule = [] {
            GaussKronrod21 r;
            const auto& kx = boost::math::quadrature::gauss_kronrod<Real, 21>::abscissa();
            const auto& kw = boost::math::quadrature::gauss_kronrod<Real, 21>::weights();
            const auto& gw = boost::math::quadrature::gauss<Real, 10>::weights();
            for (std::size_t i = 0; i < 11; ++i) {
                r.nodes[i] = kx[i];
                r.kronrod[i] = kw[i];
            }
            for (std::size_t i = 0; i < 5; ++i)
                r.gauss[2 * i + 1] = gw[i];
            return r;
        }();
        return rule;
    }
};

/// A piece of an integration path, parameterized by s in [0, 1].
/// Lines run from `a` to `b`; arcs are c + r e^{i theta} with theta moving
/// linearly from theta0 to theta1.
template <class Real>
struct Segment {
    enum class Kind { line, arc };

    Kind kind = Kind::line;
    Complex<Real> a{}, b{};
    Complex<Real> center{};
    Real radius = 0;
    Real theta0 = 0, theta1 = 0;
    /// Initial panel boundaries in the parameter, strictly increasing from 0 to 1.
    std::vector<Real> breaks{Real(0), Real(1)};

    static Segment line(Complex<Real> from, Complex<Real> to, std::size_t panels = 1)
    {
        Segment s;
        s.kind = Kind::line;
        s.a = from;
        s.b = to;
        s.breaks = uniform_breaks(panels);
        return s;
    }

    static Segment arc(Complex<Real> c, Real r, Real t0, Real t1, std::size_t panels = 4)
    {
        Segment s;
        s.kind = Kind::arc;
        s.center = c;
        s.radius = r;
        s.theta0 = t0;
        s.theta1 = t1;
        s.breaks = uniform_breaks(panels);
        return s;
    }

    static std::vector<Real> uniform_breaks(std::size_t panels)
    {
        panels = std::max<std::size_t>(panels, 1);
        std::vector<Real> br(panels + 1);
        for (std::size_t i = 0; i <= panels; ++i)
            br[i] = Real(i) / Real(panels);
        br.back() = Real(1);
        return br;
    }

    Complex<Real> point(Real s) const
    {
        if (kind == Kind::line)
            return a + (b - a) * s;
        const Real th = theta0 + (theta1 - theta0) * s;
        return center + radius * Complex<Real>(std::cos(th), std::sin(th));
    }

    Complex<Real> derivative(Real s) const
    {
        if (kind == Kind::line)
            return b - a;
        const Real th = theta0 + (theta1 - theta0) * s;
        return imag_unit<Real> * radius * Complex<Real>(std::cos(th), std::sin(th)) * (theta1 - theta0);
    }
};

template <class Real>
struct Options {
    Real rel_tol = Real(1e-10);
    Real abs_tol = Real(0);
    /// Extra absolute error per unit of the integral of |f|, used for
    /// integrands that are themselves only known to a relative accuracy.
    Real integrand_rel_error = Real(0);
    int max_depth = 48;
    std::size_t max_panels = 200000;
};

namespace detail {

template <class Real>
struct Panel {
    std::size_t segment;
    Real lo, hi;
    int depth;
    Complex<Real> value;
    Real error;
    Real abs_sum;
};

template <class Real, class F>
Panel<Real> evaluate_panel(const Segment<Real>& seg, std::size_t index, Real lo, Real hi, int depth, F& f)
{
    const auto& rule = GaussKronrod21<Real>::instance();
    const Real half = (hi - lo) / 2;
    const Real mid = (hi + lo) / 2;
    Complex<Real> k{}, g{};
    Real abs_sum = 0;
    for (std::size_t i = 0; i < 11; ++i) {
        const Real x = rule.nodes[i] * half;
        const int copies = i == 0 ? 1 : 2;
        for (int side = 0; side < copies; ++side) {
            const Real s = side == 0 ? mid + x : mid - x;
            const Complex<Real> val = f(seg.point(s)) * seg.derivative(s);
            k += rule.kronrod[i] * val;
            g += rule.gauss[i] * val;
            abs_sum += rule.kronrod[i] * std::abs(val);
        }
    }
    k *= half;
    g *= half;
    abs_sum *= std::abs(half);
    return {index, lo, hi, depth, k, std::abs(k - g), abs_sum};
}

} // namespace detail

/// Globally adaptive integration of f along a chain of segments.
///
/// Every panel is integrated with the Gauss-Kronrod 21/10 pair; the panel
/// error is the difference of the two rules and the total is the
/// root-sum-square of panel errors plus a roundoff and integrand-accuracy
/// floor. The worst panel is bisected until the total meets
/// max(rel_tol * |I|, abs_tol). Panels deeper than `max_depth` are frozen.
template <class Real, class F>
Estimate<Real> integrate(std::span<const Segment<Real>> path, F&& f, const Options<Real>& opt)
{
    using Panel = detail::Panel<Real>;
    std::vector<Panel> panels;
    for (std::size_t si = 0; si < path.size(); ++si) {
        const auto& br = path[si].breaks;
        for (std::size_t j = 0; j + 1 < br.size(); ++j)
            panels.push_back(detail::evaluate_panel(path[si], si, br[j], br[j + 1], 0, f));
    }
    std::size_t evaluations = panels.size() * 21;

    auto worse = [&](std::size_t l, std::size_t r) { return panels[l].error < panels[r].error; };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(worse)> heap(worse);
    for (std::size_t i = 0; i < panels.size(); ++i)
        heap.push(i);

    const Real eps = std::numeric_limits<Real>::epsilon();
    Complex<Real> total{};
    Real err2 = 0;
    Real abs_total = 0;
    auto resum = [&] {
        total = {};
        err2 = 0;
        abs_total = 0;
        for (const auto& p : panels) {
            total += p.value;
            err2 += p.error * p.error;
            abs_total += p.abs_sum;
        }
    };
    resum();
    for (std::size_t iter = 1;; ++iter) {
        if (iter % 64 == 0)
            resum();
        const Real floor = 50 * eps * abs_total + opt.integrand_rel_error * abs_total;
        const Real err = std::sqrt(std::max(err2, Real(0)));
        const Real target = std::max({opt.rel_tol * std::abs(total), opt.abs_tol, floor});
        if (err <= target || heap.empty()) {
            resum();
            const Real final_err = std::sqrt(err2);
            const Real final_floor = 50 * eps * abs_total + opt.integrand_rel_error * abs_total;
            const Real final_target = std::max({opt.rel_tol * std::abs(total), opt.abs_tol, final_floor});
            if (final_err <= final_target)
                return {total, final_err + final_floor, abs_total, evaluations};
            if (heap.empty())
                throw Error(ErrorKind::convergence_failure,
                            "adaptive quadrature stalled at maximum refinement depth",
                            static_cast<double>(final_err / std::max(std::abs(total), eps)));
        }
        if (panels.size() >= opt.max_panels)
            throw Error(ErrorKind::convergence_failure, "adaptive quadrature exceeded the panel budget",
                        static_cast<double>(err / std::max(std::abs(total), eps)));

        const std::size_t worst = heap.top();
        heap.pop();
        const Panel p = panels[worst];
        if (p.depth >= opt.max_depth)
            continue;
        const Real mid = (p.lo + p.hi) / 2;
        const auto& seg = path[p.segment];
        Panel left = detail::evaluate_panel(seg, p.segment, p.lo, mid, p.depth + 1, f);
        Panel right = detail::evaluate_panel(seg, p.segment, mid, p.hi, p.depth + 1, f);
        total += left.value + right.value - p.value;
        err2 += left.error * left.error + right.error * right.error - p.error * p.error;
        abs_total += left.abs_sum + right.abs_sum - p.abs_sum;
        panels[worst] = left;
        panels.push_back(right);
        evaluations += 42;
        heap.push(worst);
        heap.push(panels.size() - 1);
    }
}

template <class Real, class F>
Estimate<Real> integrate(const std::vector<Segment<Real>>& path, F&& f, const Options<Real>& opt)
{
    return integrate(std::span<const Segment<Real>>(path), std::forward<F>(f), opt);
}

} // namespace qdilog::quad

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "qdilog/config.hpp"
#include "qdilog/errors.hpp"
#include "qdilog/exact.hpp"
#include "qdilog/gb.hpp"
#include "qdilog/quadrature.hpp"
#include "qdilog/symbol.hpp"

namespace qdilog {

// ---------------------------------------------------------------------------
// Integrands
// ---------------------------------------------------------------------------

/// e^{gauss} * prod G_b(arg)^e as a function of one generator.
struct IntegrandSpec {
    std::string variable = "btau";
    GaussExponent gauss;
    FactorSet factors;

    static IntegrandSpec from_symbol(const std::string& variable, const Symbol& s)
    {
        return {variable, s.gauss, s.factors};
    }

    Symbol symbol() const { return {gauss, factors}; }

    /// Every factor is either constant in the variable or affine in it with a
    /// nonzero coefficient; the exponent is at most quadratic by construction.
    void validate() const
    {
        if (!is_registered_generator(variable) || variable == unit_generator)
            throw Error(ErrorKind::invalid_parameter, "integration variable must be a registered generator");
    }
};

/// Numeric form of an IntegrandSpec with every other generator bound.
template <class Real>
class CompiledIntegrand {
public:
    struct Term {
        Complex<Real> offset;  // argument = offset + slope * x
        Complex<Real> slope;
        int exponent;
    };

    CompiledIntegrand(const IntegrandSpec& spec, Bindings<Real> env, const ModulusParam<Real>& m,
                      const EvalConfig& cfg)
        : m_(m)
        , cfg_(cfg)
    {
        spec.validate();
        env.erase(spec.variable);
        const auto d = spec.gauss.decompose(spec.variable);
        quad_ = pi_v<Real> * d.quadratic.template to_complex<Real>();
        lin_ = pi_v<Real> * d.linear.evaluate(env);
        FactorSet constant;
        for (const auto& f : spec.factors.factors()) {
            if (!f.argument.depends_on(spec.variable)) {
                constant.add(f.argument, f.exponent);
                continue;
            }
            terms_.push_back({f.argument.without(spec.variable).evaluate(env),
                              f.argument.coefficient(spec.variable).template to_complex<Real>(), f.exponent});
        }
        // Constant parts are evaluated once.
        const auto c = evaluate_factors(constant, env, m, cfg, d.rest.evaluate(env));
        constant_ = c.value;
        constant_error_ = c.error;
    }

    const std::vector<Term>& terms() const noexcept { return terms_; }
    Complex<Real> quadratic() const noexcept { return quad_; }
    Complex<Real> linear() const noexcept { return lin_; }
    Complex<Real> constant() const noexcept { return constant_; }
    const ModulusParam<Real>& modulus() const noexcept { return m_; }

    /// Value at x with relative error estimate.
    Estimate<Real> evaluate(Complex<Real> x) const
    {
        Estimate<Real> out;
        if (constant_ == Complex<Real>(0))
            return out;
        Complex<Real> log_value = (quad_ * x + lin_) * x;
        Real err = constant_error_;
        const Real eps = static_cast<Real>(cfg_.pole_eps);
        for (const auto& t : terms_) {
            const Complex<Real> z = t.offset + t.slope * x;
            if (t.exponent < 0 && pole_distance(z, m_) < eps)
                return out;
            if (t.exponent < 0 && zero_distance(z, m_) < eps)
                throw Error(ErrorKind::pole_proximity, "integrand evaluated on a pole");
            const auto lg = log_gb_estimate(z, m_, cfg_);
            if (std::isinf(lg.value.real()))
                return out;
            log_value += Real(t.exponent) * lg.value;
            err += Real(std::abs(t.exponent)) * lg.error;
        }
        out.value = constant_ * std::exp(log_value);
        out.error = err;
        return out;
    }

    Complex<Real> operator()(Complex<Real> x) const { return evaluate(x).value; }

    /// Sum of |exponent| over variable-dependent factors.
    int total_order() const
    {
        int n = 0;
        for (const auto& t : terms_)
            n += std::abs(t.exponent);
        return n;
    }

private:
    ModulusParam<Real> m_;
    EvalConfig cfg_;
    Complex<Real> quad_{}, lin_{};
    std::vector<Term> terms_;
    Complex<Real> constant_{1, 0};
    Real constant_error_ = 0;
};

/// Configuration for G_b evaluations inside a contour integral: two digits
/// tighter than the integral itself, within binary64 reach.
inline EvalConfig inner_config(const EvalConfig& cfg)
{
    EvalConfig inner = cfg;
    inner.rel_tol = std::clamp(cfg.rel_tol * 1e-2, 1e-13, 1e-10);
    return inner;
}

// ---------------------------------------------------------------------------
// Pole sequences
// ---------------------------------------------------------------------------

enum class Direction { up, down };

inline std::string_view to_string(Direction d) { return d == Direction::up ? "up" : "down"; }

/// base + n * step, n >= 0: poles of the integrand from one G_b factor along
/// one generator of the lattice n1 b + n2/b.
template <class Real>
struct PoleSeq {
    Complex<Real> base;
    Complex<Real> step;
    Direction direction;
    /// Exponent of the factor that produces the sequence.
    int exponent = 1;
    std::string source;
};

/// An integrand pole after numerator/denominator cancellation.
template <class Real>
struct Pole {
    Complex<Real> location;
    Direction direction;
    int order = 1;
};

namespace detail {

template <class Real>
Direction classify_step(Complex<Real> step)
{
    if (std::abs(step.imag()) <= Real(1e-12) * std::abs(step))
        throw Error(ErrorKind::degenerate_parameter, "pole sequence runs parallel to the real axis");
    return step.imag() > 0 ? Direction::up : Direction::down;
}

} // namespace detail

/// Raw pole sequences, two per variable-dependent factor. Numerator factors
/// give G_b poles, denominator factors give G_b zeros.
template <class Real>
std::vector<PoleSeq<Real>> pole_sequences(const IntegrandSpec& spec, const Bindings<Real>& env,
                                          const ModulusParam<Real>& m)
{
    Bindings<Real> e = env;
    e.erase(spec.variable);
    std::vector<PoleSeq<Real>> out;
    for (const auto& f : spec.factors.factors()) {
        if (!f.argument.depends_on(spec.variable))
            continue;
        const Complex<Real> c = f.argument.coefficient(spec.variable).template to_complex<Real>();
        const Complex<Real> a = f.argument.without(spec.variable).evaluate(e);
        const std::string src = "G(" + f.argument.str() + ")^" + std::to_string(f.exponent);
        const Real sign = f.exponent > 0 ? Real(-1) : Real(1);
        const Complex<Real> base = f.exponent > 0 ? -a / c : (m.Q() - a) / c;
        for (Complex<Real> g : {m.b(), m.b_inv()}) {
            const Complex<Real> step = sign * g / c;
            out.push_back({base, step, detail::classify_step(step), f.exponent, src});
        }
    }
    return out;
}

/// Integrand poles within `reach` (in imaginary part) of their sequence base,
/// with orders from the net G_b order of all factors at each candidate point.
template <class Real>
std::vector<Pole<Real>> locate_poles(const IntegrandSpec& spec, const Bindings<Real>& env,
                                     const ModulusParam<Real>& m, Real reach = Real(4))
{
    Bindings<Real> e = env;
    e.erase(spec.variable);
    struct Lin {
        Complex<Real> a, c;
        int exponent;
    };
    std::vector<Lin> lins;
    for (const auto& f : spec.factors.factors())
        if (f.argument.depends_on(spec.variable))
            lins.push_back({f.argument.without(spec.variable).evaluate(e),
                            f.argument.coefficient(spec.variable).template to_complex<Real>(), f.exponent});

    struct Candidate {
        Complex<Real> x;
        bool up = false, down = false;
    };
    std::vector<Candidate> cands;
    auto tol = [](Complex<Real> x) { return Real(1e-8) * (1 + std::abs(x)); };
    auto add_candidate = [&](Complex<Real> x, Direction d) {
        for (auto& c : cands)
            if (std::abs(c.x - x) < tol(x)) {
                (d == Direction::up ? c.up : c.down) = true;
                return;
            }
        cands.push_back({x, d == Direction::up, d == Direction::down});
    };

    for (const auto& l : lins) {
        const Real sign = l.exponent > 0 ? Real(-1) : Real(1);
        const Complex<Real> base = l.exponent > 0 ? -l.a / l.c : (m.Q() - l.a) / l.c;
        const Complex<Real> s1 = sign * m.b() / l.c;
        const Complex<Real> s2 = sign * m.b_inv() / l.c;
        const Direction d1 = detail::classify_step(s1);
        const Direction d2 = detail::classify_step(s2);
        if (d1 != d2)
            throw Error(ErrorKind::unsupported_configuration, "pole lattice of a factor is not one-sided");
        for (int n1 = 0; n1 < 64; ++n1) {
            const Complex<Real> row = base + Real(n1) * s1;
            if (std::abs((row - base).imag()) > reach)
                break;
            for (int n2 = 0; n2 < 64; ++n2) {
                const Complex<Real> x = row + Real(n2) * s2;
                if (std::abs((x - base).imag()) > reach)
                    break;
                add_candidate(x, d1);
            }
        }
    }

    // Net order: each factor contributes -e at a G_b pole and +e at a G_b zero.
    std::vector<Pole<Real>> out;
    for (const auto& c : cands) {
        int net = 0;
        for (const auto& l : lins) {
            const Complex<Real> z = l.a + l.c * c.x;
            if (pole_distance(z, m) < tol(z))
                net -= l.exponent;
            else if (zero_distance(z, m) < tol(z))
                net += l.exponent;
        }
        if (net >= 0)
            continue;
        if (c.up && c.down)
            throw Error(ErrorKind::degenerate_parameter, "pole sequences going up and down pinch the contour");
        out.push_back({c.x, c.up ? Direction::up : Direction::down, -net});
    }
    std::sort(out.begin(), out.end(), [](const Pole<Real>& l, const Pole<Real>& r) {
        if (l.location.real() != r.location.real())
            return l.location.real() < r.location.real();
        return l.location.imag() < r.location.imag();
    });
    return out;
}

// ---------------------------------------------------------------------------
// Contours
// ---------------------------------------------------------------------------

enum class Side { above, below };

inline std::string_view to_string(Side s) { return s == Side::above ? "above" : "below"; }

template <class Real>
struct Indentation {
    Complex<Real> center;
    Real radius;
    Side side;
};

/// Horizontal line Im x = baseline from -truncation_left to truncation_right,
/// with half-circle detours around poles that sit on the wrong side of it.
/// The contour passes above every down-going sequence and below every up-going
/// one.
template <class Real>
struct ContourSpec {
    Real baseline = 0;
    std::vector<Indentation<Real>> indentations;
    Real truncation_left = 0;
    Real truncation_right = 0;
    /// Largest Im of down poles and smallest Im of up poles (+-inf if none).
    Real gap_lower = -std::numeric_limits<Real>::infinity();
    Real gap_upper = std::numeric_limits<Real>::infinity();
    /// Tail estimate beyond the truncation points; negative when unknown.
    Real tail_bound = -1;

    bool separable() const { return gap_lower < gap_upper; }
    Real truncation() const { return std::max(truncation_left, truncation_right); }
};

namespace detail {

template <class Real>
Real pinch_eps(Complex<Real> x)
{
    return Real(1e-8) * (1 + std::abs(x));
}

template <class Real>
Real choose_baseline(Real lower, Real upper)
{
    const bool has_lower = std::isfinite(lower);
    const bool has_upper = std::isfinite(upper);
    if (has_lower && has_upper)
        return (lower + upper) / 2;
    if (has_upper)
        return upper > 0 ? Real(0) : upper - Real(0.5);
    if (has_lower)
        return lower < 0 ? Real(0) : lower + Real(0.5);
    return 0;
}

} // namespace detail

/// Plans the contour from located poles. A horizontal line through the middle
/// of the gap is used when one exists; otherwise the real axis with detours of
/// radius min(1/4 of the smallest pole spacing near the axis, 1/2).
template <class Real>
ContourSpec<Real> plan_contour(const std::vector<Pole<Real>>& poles, const EvalConfig& cfg = {})
{
    (void)cfg;
    ContourSpec<Real> c;
    for (const auto& p : poles) {
        if (p.direction == Direction::down)
            c.gap_lower = std::max(c.gap_lower, p.location.imag());
        else
            c.gap_upper = std::min(c.gap_upper, p.location.imag());
    }
    for (const auto& u : poles)
        for (const auto& d : poles)
            if (u.direction == Direction::up && d.direction == Direction::down
                && std::abs(u.location - d.location) < detail::pinch_eps(u.location))
                throw Error(ErrorKind::degenerate_parameter, "an up-going and a down-going pole coincide");

    if (c.separable()) {
        c.baseline = detail::choose_baseline(c.gap_lower, c.gap_upper);
        return c;
    }

    c.baseline = 0;
    const Real band = 2;
    Real radius = Real(0.5);
    for (std::size_t i = 0; i < poles.size(); ++i) {
        if (std::abs(poles[i].location.imag() - c.baseline) > band)
            continue;
        for (std::size_t j = i + 1; j < poles.size(); ++j) {
            if (std::abs(poles[j].location.imag() - c.baseline) > band)
                continue;
            radius = std::min(radius, std::abs(poles[i].location - poles[j].location) / 4);
        }
    }
    for (const auto& p : poles) {
        const Real h = p.location.imag() - c.baseline;
        const bool offends = p.direction == Direction::down ? h > -radius / 2 : h < radius / 2;
        if (!offends)
            continue;
        if (std::abs(h) > radius / 2)
            throw Error(ErrorKind::unsupported_configuration,
                        "no separating contour: a pole lies on the wrong side, away from the real axis");
        c.indentations.push_back({Complex<Real>(p.location.real(), c.baseline), radius,
                                  p.direction == Direction::down ? Side::above : Side::below});
    }
    std::sort(c.indentations.begin(), c.indentations.end(),
              [](const auto& l, const auto& r) { return l.center.real() < r.center.real(); });
    for (std::size_t i = 0; i + 1 < c.indentations.size(); ++i)
        if (c.indentations[i + 1].center.real() - c.indentations[i].center.real() < 2 * radius)
            throw Error(ErrorKind::unsupported_configuration, "indentations overlap");
    return c;
}

/// Plans from raw sequences, taking each base as the leading pole. Later
/// members of a sequence lie further along its direction and never matter.
template <class Real>
ContourSpec<Real> plan_contour(const std::vector<PoleSeq<Real>>& sequences, const EvalConfig& cfg = {})
{
    std::vector<Pole<Real>> bases;
    for (const auto& s : sequences) {
        const bool seen = std::any_of(bases.begin(), bases.end(), [&](const Pole<Real>& p) {
            return p.direction == s.direction && std::abs(p.location - s.base) < detail::pinch_eps(s.base);
        });
        if (!seen)
            bases.push_back({s.base, s.direction, std::abs(s.exponent)});
    }
    return plan_contour(bases, cfg);
}

/// Chain of quadrature segments realizing the contour.
template <class Real>
std::vector<quad::Segment<Real>> contour_segments(const ContourSpec<Real>& c)
{
    std::vector<quad::Segment<Real>> path;
    const Real y = c.baseline;
    auto add_line = [&](Real x0, Real x1) {
        if (x1 <= x0)
            return;
        const auto panels = static_cast<std::size_t>(std::ceil(x1 - x0));
        path.push_back(quad::Segment<Real>::line({x0, y}, {x1, y}, std::max<std::size_t>(panels, 1)));
    };
    Real x = -c.truncation_left;
    for (const auto& ind : c.indentations) {
        const Real cx = ind.center.real();
        add_line(x, cx - ind.radius);
        const Real end = ind.side == Side::above ? Real(0) : 2 * pi_v<Real>;
        path.push_back(quad::Segment<Real>::arc(ind.center, ind.radius, pi_v<Real>, end, 4));
        x = cx + ind.radius;
    }
    add_line(x, c.truncation_right);
    return path;
}

/// Tail bounds at the chosen truncation points.
template <class Real>
struct Truncation {
    Real left = 0, right = 0;
    Real tail_left = 0, tail_right = 0;
};

/// Walks outward along the baseline until |f(T)| / (local decay rate) is below
/// the tail budget on each side.
template <class Real>
Truncation<Real> choose_truncation(const CompiledIntegrand<Real>& f, const ContourSpec<Real>& c, const EvalConfig& cfg,
                                   Real t_max = Real(500))
{
    Real start = 1;
    for (const auto& ind : c.indentations)
        start = std::max(start, std::abs(ind.center.real()) + ind.radius + Real(0.5));

    auto mag = [&](Real x) {
        for (int k = 0; k < 4; ++k) {
            try {
                return std::abs(f(Complex<Real>(x, c.baseline)));
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::pole_proximity)
                    throw;
                x += Real(0.0137);
            }
        }
        throw Error(ErrorKind::unsupported_configuration, "integrand has poles on the baseline");
    };

    Real scale = 0;
    for (Real x = -start; x <= start; x += start / 8)
        scale = std::max(scale, mag(x));
    if (scale == 0)
        scale = 1;
    const Real budget = detail::tail_tolerance<Real>(cfg) * scale;

    Truncation<Real> out;
    for (int side : {-1, 1}) {
        Real x = start;
        Real h = Real(0.5);
        Real prev = mag(side * x);
        int good = 0;
        for (;;) {
            const Real x2 = x + h;
            if (x2 > t_max)
                throw Error(ErrorKind::tail_non_decaying, "integrand does not decay along the contour");
            const Real cur = mag(side * x2);
            const Real rate = (prev > 0 && cur > 0) ? std::log(prev / cur) / h : std::numeric_limits<Real>::infinity();
            const Real tail = rate > 0 ? cur / rate : std::numeric_limits<Real>::infinity();
            good = (rate > 0 && tail <= budget) ? good + 1 : 0;
            x = x2;
            prev = cur;
            if (good >= 2) {
                (side < 0 ? out.left : out.right) = x;
                (side < 0 ? out.tail_left : out.tail_right) = tail;
                break;
            }
            if (x > 20)
                h = std::min(h * Real(1.25), Real(8));
        }
    }
    return out;
}

/// Integral with error estimate and the contour used.
template <class Real>
struct ContourResult {
    Complex<Real> value;
    Real error = 0;
    ContourSpec<Real> contour;
    std::size_t evaluations = 0;
};

/// Integrates the compiled integrand along the contour. A zero truncation is
/// replaced by choose_truncation. The error combines the quadrature estimate,
/// the propagated G_b error, roundoff and both tail bounds.
template <class Real>
ContourResult<Real> integrate_contour(const CompiledIntegrand<Real>& f, ContourSpec<Real> contour, const EvalConfig& cfg)
{
    validate(cfg);
    if (contour.truncation_left <= 0 || contour.truncation_right <= 0 || contour.tail_bound < 0) {
        const auto t = choose_truncation(f, contour, cfg);
        if (contour.truncation_left <= 0 || contour.truncation_right <= 0) {
            contour.truncation_left = t.left;
            contour.truncation_right = t.right;
        }
        contour.tail_bound = t.tail_left + t.tail_right;
        // A caller-supplied truncation shorter than the planned one gets the
        // endpoint magnitudes as a crude tail bound.
        if (contour.truncation_left < t.left || contour.truncation_right < t.right)
            contour.tail_bound += std::abs(f(Complex<Real>(-contour.truncation_left, contour.baseline)))
                + std::abs(f(Complex<Real>(contour.truncation_right, contour.baseline)));
    }
    const Real tails = contour.tail_bound;

    Real worst_rel = 0;
    auto integrand = [&](Complex<Real> x) {
        const auto e = f.evaluate(x);
        worst_rel = std::max(worst_rel, e.error);
        return e.value;
    };
    quad::Options<Real> opt;
    opt.rel_tol = static_cast<Real>(cfg.rel_tol);
    opt.abs_tol = static_cast<Real>(cfg.abs_floor);
    opt.max_depth = cfg.max_refine;
    opt.integrand_rel_error = Real(f.total_order() + 1) * static_cast<Real>(inner_config(cfg).rel_tol);
    const auto path = contour_segments(contour);
    const auto q = quad::integrate(path, integrand, opt);

    ContourResult<Real> out;
    out.value = q.value;
    out.error = q.error + worst_rel * q.abs_integral + tails;
    out.contour = contour;
    out.evaluations = q.evaluations;
    return out;
}

/// Plans and integrates in one step.
template <class Real>
ContourResult<Real> integrate_spec(const IntegrandSpec& spec, const Bindings<Real>& env, const ModulusParam<Real>& m,
                                   const EvalConfig& cfg)
{
    const CompiledIntegrand<Real> f(spec, env, m, inner_config(cfg));
    const auto contour = plan_contour(locate_poles(spec, env, m), cfg);
    return integrate_contour(f, contour, cfg);
}

// ---------------------------------------------------------------------------
// Self-checks of a computed integral
// ---------------------------------------------------------------------------

template <class Real>
struct ConsistencyCheck {
    std::string kind;
    Complex<Real> value;
    Real error = 0;
    Real deviation = 0;
    Real allowed = 0;
    bool pass = false;
};

/// Same integral on a deformed contour: baseline moved by a quarter of the
/// separating gap, or detour radii scaled by 0.6. Cauchy's theorem says the
/// value must not move beyond the combined error estimates.
template <class Real>
ConsistencyCheck<Real> check_contour_independence(const CompiledIntegrand<Real>& f, const ContourResult<Real>& base,
                                                  const EvalConfig& cfg)
{
    ContourSpec<Real> alt = base.contour;
    alt.truncation_left = alt.truncation_right = 0;
    alt.tail_bound = -1;
    if (alt.separable()) {
        const bool lo = std::isfinite(alt.gap_lower), hi = std::isfinite(alt.gap_upper);
        Real shift = Real(0.25);
        if (lo && hi)
            shift = Real(0.25) * (alt.gap_upper - alt.gap_lower);
        else if (hi)
            shift = -Real(0.25);
        alt.baseline += shift;
        alt.baseline = std::clamp(alt.baseline, alt.gap_lower, alt.gap_upper);
    } else {
        for (auto& ind : alt.indentations)
            ind.radius *= Real(0.6);
    }
    const auto r = integrate_contour(f, alt, cfg);
    ConsistencyCheck<Real> c;
    c.kind = alt.separable() ? "baseline_shift" : "indentation_radius";
    c.value = r.value;
    c.error = r.error;
    c.deviation = std::abs(r.value - base.value);
    c.allowed = r.error + base.error;
    c.pass = c.deviation <= c.allowed;
    return c;
}

/// Same integral with both truncation points doubled.
template <class Real>
ConsistencyCheck<Real> check_truncation_doubling(const CompiledIntegrand<Real>& f, const ContourResult<Real>& base,
                                                 const EvalConfig& cfg)
{
    ContourSpec<Real> alt = base.contour;
    alt.truncation_left *= 2;
    alt.truncation_right *= 2;
    const auto r = integrate_contour(f, alt, cfg);
    ConsistencyCheck<Real> c;
    c.kind = "truncation_doubling";
    c.value = r.value;
    c.error = r.error;
    c.deviation = std::abs(r.value - base.value);
    c.allowed = r.error + base.error;
    c.pass = c.deviation <= c.allowed;
    return c;
}

} // namespace qdilog

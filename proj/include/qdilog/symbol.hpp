#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "qdilog/config.hpp"
#include "qdilog/exact.hpp"
#include "qdilog/gb.hpp"

namespace qdilog {

/// G_b(argument)^exponent.
struct GbFactor {
    AffineForm argument;
    int exponent = 1;

    friend bool operator==(const GbFactor&, const GbFactor&) = default;
};

/// Multiset of G_b factors. Equal arguments merge by adding exponents and
/// zero exponents disappear, so two sets are equal iff their maps are.
class FactorSet {
public:
    FactorSet() = default;
    FactorSet(std::initializer_list<GbFactor> init)
    {
        for (const auto& f : init)
            add(f.argument, f.exponent);
    }

    FactorSet& add(const AffineForm& argument, int exponent = 1)
    {
        if (exponent == 0)
            return *this;
        auto [it, inserted] = map_.try_emplace(argument, exponent);
        if (!inserted)
            it->second += exponent;
        if (it->second == 0)
            map_.erase(it);
        return *this;
    }

    FactorSet& operator*=(const FactorSet& o)
    {
        for (const auto& [arg, e] : o.map_)
            add(arg, e);
        return *this;
    }
    friend FactorSet operator*(FactorSet a, const FactorSet& b) { return a *= b; }
    FactorSet inverse() const
    {
        FactorSet out = *this;
        for (auto& [arg, e] : out.map_)
            e = -e;
        return out;
    }

    FactorSet substitute(const std::string& name, const AffineForm& repl) const
    {
        FactorSet out;
        for (const auto& [arg, e] : map_)
            out.add(arg.substitute(name, repl), e);
        return out;
    }

    bool depends_on(const std::string& name) const
    {
        for (const auto& [arg, e] : map_)
            if (arg.depends_on(name))
                return true;
        return false;
    }

    std::vector<GbFactor> factors() const
    {
        std::vector<GbFactor> out;
        for (const auto& [arg, e] : map_)
            out.push_back({arg, e});
        return out;
    }

    int exponent(const AffineForm& argument) const
    {
        auto it = map_.find(argument);
        return it == map_.end() ? 0 : it->second;
    }

    const std::map<AffineForm, int>& map() const noexcept { return map_; }
    bool empty() const noexcept { return map_.empty(); }
    std::size_t size() const noexcept { return map_.size(); }

    friend bool operator==(const FactorSet&, const FactorSet&) = default;

    std::string str() const
    {
        std::string s;
        for (const auto& [arg, e] : map_) {
            if (!s.empty())
                s += " ";
            s += "G(" + arg.str() + ")";
            if (e != 1)
                s += "^" + std::to_string(e);
        }
        return s.empty() ? "1" : s;
    }

private:
    std::map<AffineForm, int> map_;
};

/// Product of G_b factors with exponents, numerically. The error is relative.
/// A zero of a numerator factor (or pole of a denominator factor) gives 0; the
/// opposite cases throw pole_proximity.
template <class Real>
Estimate<Real> evaluate_factors(const FactorSet& fs, const Bindings<Real>& env, const ModulusParam<Real>& m,
                                const EvalConfig& cfg, Complex<Real> log_prefactor = {})
{
    const Real eps = static_cast<Real>(cfg.pole_eps);
    Complex<Real> log_value = log_prefactor;
    Real rel_err = 0;
    bool vanishes = false;
    for (const auto& [arg, e] : fs.map()) {
        const Complex<Real> z = arg.evaluate(env);
        if (e < 0 && pole_distance(z, m) < eps) {
            vanishes = true;
            continue;
        }
        if (e < 0 && zero_distance(z, m) < eps)
            throw Error(ErrorKind::pole_proximity, "denominator G_b(" + arg.str() + ") vanishes");
        const auto lg = log_gb_estimate(z, m, cfg);
        if (std::isinf(lg.value.real())) {
            vanishes = true;
            continue;
        }
        log_value += Real(e) * lg.value;
        rel_err += Real(std::abs(e)) * lg.error;
    }
    Estimate<Real> out;
    if (vanishes)
        return out;
    out.value = std::exp(log_value);
    out.error = rel_err;
    return out;
}

/// e^{gauss} times a multiset of G_b factors: the multiplicative part of a
/// weighted shift operator, and the integrand of a contour integral.
struct Symbol {
    GaussExponent gauss;
    FactorSet factors;

    static Symbol unit() { return {}; }

    Symbol& operator*=(const Symbol& o)
    {
        gauss += o.gauss;
        factors *= o.factors;
        return *this;
    }
    friend Symbol operator*(Symbol a, const Symbol& b) { return a *= b; }
    Symbol inverse() const { return {-gauss, factors.inverse()}; }
    friend Symbol operator/(Symbol a, const Symbol& b) { return a *= b.inverse(); }

    Symbol substitute(const std::string& name, const AffineForm& repl) const
    {
        return {gauss.substitute(name, repl), factors.substitute(name, repl)};
    }

    bool depends_on(const std::string& name) const { return gauss.depends_on(name) || factors.depends_on(name); }

    friend bool operator==(const Symbol&, const Symbol&) = default;

    std::string str() const { return "exp(" + gauss.str() + ") " + factors.str(); }

    /// Value with relative error estimate.
    template <class Real>
    Estimate<Real> evaluate(const Bindings<Real>& env, const ModulusParam<Real>& m, const EvalConfig& cfg) const
    {
        return evaluate_factors(factors, env, m, cfg, gauss.evaluate(env));
    }
};

/// Outcome of an exact comparison. On mismatch it lists the Gaussian terms of
/// lhs/rhs and the factors left after cancelling rhs against lhs.
struct SymbolDiff {
    bool equal = true;
    GaussExponent gauss_difference;
    FactorSet unmatched_factors;

    std::string str() const
    {
        if (equal)
            return "equal";
        return "gauss difference " + gauss_difference.str() + "; unmatched " + unmatched_factors.str();
    }
};

inline SymbolDiff symbol_equal_exact(const Symbol& a, const Symbol& b)
{
    SymbolDiff d;
    d.gauss_difference = a.gauss - b.gauss;
    d.unmatched_factors = a.factors * b.factors.inverse();
    d.equal = d.gauss_difference.is_zero() && d.unmatched_factors.empty();
    return d;
}

} // namespace qdilog

#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <complex>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qdilog/errors.hpp"
#include "qdilog/numeric.hpp"

namespace qdilog {

using Rational = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// Gaussian rationals
// ---------------------------------------------------------------------------

/// re + i im with exact rational parts.
class GaussianRational {
public:
    GaussianRational() = default;
    GaussianRational(long long n) : re_(n) {}
    GaussianRational(Rational re, Rational im = Rational(0)) : re_(std::move(re)), im_(std::move(im)) {}

    /// num/den as a real rational.
    static GaussianRational ratio(long long num, long long den) { return {Rational(num, den)}; }
    static GaussianRational i() { return {Rational(0), Rational(1)}; }

    const Rational& re() const noexcept { return re_; }
    const Rational& im() const noexcept { return im_; }
    bool is_zero() const { return re_ == 0 && im_ == 0; }
    bool is_real() const { return im_ == 0; }
    GaussianRational conj() const { return {re_, -im_}; }

    GaussianRational operator-() const { return {-re_, -im_}; }
    GaussianRational& operator+=(const GaussianRational& o)
    {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o)
    {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o)
    {
        Rational r = re_ * o.re_ - im_ * o.im_;
        im_ = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        return *this;
    }
    GaussianRational& operator/=(const GaussianRational& o)
    {
        const Rational n = o.re_ * o.re_ + o.im_ * o.im_;
        if (n == 0)
            throw Error(ErrorKind::invalid_parameter, "division by zero Gaussian rational");
        *this *= o.conj();
        re_ /= n;
        im_ /= n;
        return *this;
    }
    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b)
    {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator<(const GaussianRational& a, const GaussianRational& b)
    {
        if (a.re_ != b.re_)
            return a.re_ < b.re_;
        return a.im_ < b.im_;
    }

    template <class Real>
    Complex<Real> to_complex() const
    {
        return {re_.template convert_to<Real>(), im_.template convert_to<Real>()};
    }

    std::string str() const
    {
        std::ostringstream os;
        if (im_ == 0)
            os << re_;
        else if (re_ == 0)
            os << im_ << "i";
        else
            os << "(" << re_ << (im_ > 0 ? "+" : "") << im_ << "i)";
        return os.str();
    }

private:
    Rational re_{0};
    Rational im_{0};
};

inline std::ostream& operator<<(std::ostream& os, const GaussianRational& g) { return os << g.str(); }

/// Shorthand for i * num/den.
inline GaussianRational imag_ratio(long long num, long long den = 1) { return {Rational(0), Rational(num, den)}; }

// ---------------------------------------------------------------------------
// Formal generators and numeric bindings
// ---------------------------------------------------------------------------

/// Name of the generator that always evaluates to 1.
inline constexpr std::string_view unit_generator = "unit";

/// Generators understood by the symbolic layer. bs, bt, bp, btau stand for the
/// products b*s, b*t, b*p, b*tau; Q is b + 1/b kept as an independent symbol.
inline constexpr std::array<std::string_view, 24> registered_generators{
    "unit", "u", "alpha", "b", "Q", "bs", "bt", "bp", "bs1", "bs2", "bt1", "bt2",
    "bp1", "bp2", "btau", "tau", "beta", "A", "B", "C", "D", "x", "y", "z",
};

inline bool is_registered_generator(std::string_view name)
{
    return std::find(registered_generators.begin(), registered_generators.end(), name) != registered_generators.end();
}

/// Numeric values for generators. `unit` is always bound to 1.
template <class Real>
class Bindings {
public:
    Bindings() = default;
    Bindings(std::initializer_list<std::pair<const std::string, Complex<Real>>> init)
    {
        for (const auto& [k, v] : init)
            set(k, v);
    }

    Bindings& set(const std::string& name, Complex<Real> value)
    {
        if (!is_registered_generator(name) || name == unit_generator)
            throw Error(ErrorKind::invalid_parameter, "cannot bind generator '" + name + "'");
        values_[name] = value;
        return *this;
    }

    bool has(const std::string& name) const { return name == unit_generator || values_.count(name) != 0; }

    Complex<Real> get(const std::string& name) const
    {
        if (name == unit_generator)
            return {1, 0};
        auto it = values_.find(name);
        if (it == values_.end())
            throw Error(ErrorKind::invalid_parameter, "generator '" + name + "' is not bound");
        return it->second;
    }

    void erase(const std::string& name) { values_.erase(name); }
    const std::map<std::string, Complex<Real>>& values() const noexcept { return values_; }

private:
    std::map<std::string, Complex<Real>> values_;
};

// ---------------------------------------------------------------------------
// Affine forms
// ---------------------------------------------------------------------------

/// constant + sum_g c_g * g over registered generators, exact.
/// Zero coefficients are never stored, so structural equality is equality.
class AffineForm {
public:
    AffineForm() = default;
    AffineForm(GaussianRational constant) : constant_(std::move(constant)) {}
    AffineForm(long long constant) : constant_(constant) {}

    static AffineForm generator(const std::string& name, const GaussianRational& coeff = 1)
    {
        if (!is_registered_generator(name))
            throw Error(ErrorKind::invalid_parameter, "unknown generator '" + name + "'");
        AffineForm f;
        if (name == unit_generator)
            f.constant_ = coeff;
        else
            f.add_term(name, coeff);
        return f;
    }

    const std::map<std::string, GaussianRational>& coefficients() const noexcept { return coeffs_; }
    const GaussianRational& constant() const noexcept { return constant_; }

    GaussianRational coefficient(const std::string& name) const
    {
        if (name == unit_generator)
            return constant_;
        auto it = coeffs_.find(name);
        return it == coeffs_.end() ? GaussianRational{} : it->second;
    }

    bool depends_on(const std::string& name) const { return coeffs_.count(name) != 0; }
    bool is_constant() const { return coeffs_.empty(); }

    /// The form with the `name` term dropped.
    AffineForm without(const std::string& name) const
    {
        AffineForm f = *this;
        f.coeffs_.erase(name);
        return f;
    }

    /// Replaces generator `name` by `repl` everywhere.
    AffineForm substitute(const std::string& name, const AffineForm& repl) const
    {
        auto it = coeffs_.find(name);
        if (it == coeffs_.end())
            return *this;
        const GaussianRational c = it->second;
        return without(name) + repl * c;
    }

    AffineForm& operator+=(const AffineForm& o)
    {
        constant_ += o.constant_;
        for (const auto& [k, v] : o.coeffs_)
            add_term(k, v);
        return *this;
    }
    AffineForm& operator-=(const AffineForm& o) { return *this += -o; }
    AffineForm& operator*=(const GaussianRational& c)
    {
        if (c.is_zero()) {
            *this = AffineForm{};
            return *this;
        }
        constant_ *= c;
        for (auto& [k, v] : coeffs_)
            v *= c;
        return *this;
    }
    AffineForm operator-() const { return *this * GaussianRational(-1); }
    friend AffineForm operator+(AffineForm a, const AffineForm& b) { return a += b; }
    friend AffineForm operator-(AffineForm a, const AffineForm& b) { return a -= b; }
    friend AffineForm operator*(AffineForm a, const GaussianRational& c) { return a *= c; }
    friend AffineForm operator*(const GaussianRational& c, AffineForm a) { return a *= c; }

    friend bool operator==(const AffineForm& a, const AffineForm& b)
    {
        return a.constant_ == b.constant_ && a.coeffs_ == b.coeffs_;
    }
    friend bool operator<(const AffineForm& a, const AffineForm& b)
    {
        if (!(a.constant_ == b.constant_))
            return a.constant_ < b.constant_;
        return a.coeffs_ < b.coeffs_;
    }

    template <class Real>
    Complex<Real> evaluate(const Bindings<Real>& env) const
    {
        Complex<Real> v = constant_.template to_complex<Real>();
        for (const auto& [k, c] : coeffs_)
            v += c.template to_complex<Real>() * env.get(k);
        return v;
    }

    /// (name, coefficient) pairs including the constant under `unit`.
    std::vector<std::pair<std::string, GaussianRational>> terms() const
    {
        std::vector<std::pair<std::string, GaussianRational>> out(coeffs_.begin(), coeffs_.end());
        if (!constant_.is_zero())
            out.emplace_back(std::string(unit_generator), constant_);
        return out;
    }

    std::string str() const
    {
        std::string s;
        for (const auto& [k, c] : coeffs_) {
            if (!s.empty())
                s += " + ";
            s += c.str() + "*" + k;
        }
        if (!constant_.is_zero() || s.empty())
            s += (s.empty() ? "" : " + ") + constant_.str();
        return s;
    }

private:
    void add_term(const std::string& name, const GaussianRational& c)
    {
        auto [it, inserted] = coeffs_.try_emplace(name, c);
        if (!inserted)
            it->second += c;
        if (it->second.is_zero())
            coeffs_.erase(it);
    }

    std::map<std::string, GaussianRational> coeffs_;
    GaussianRational constant_;
};

inline std::ostream& operator<<(std::ostream& os, const AffineForm& f) { return os << f.str(); }

/// c * g as an affine form.
inline AffineForm gen(const std::string& name, const GaussianRational& coeff = 1)
{
    return AffineForm::generator(name, coeff);
}

// ---------------------------------------------------------------------------
// Gaussian exponents
// ---------------------------------------------------------------------------

/// pi * sum c_{gh} g h over unordered generator pairs; linear and constant
/// terms pair with `unit`.
class GaussExponent {
public:
    using Key = std::pair<std::string, std::string>;

    GaussExponent() = default;

    /// pi * c * x * y.
    static GaussExponent product(const AffineForm& x, const AffineForm& y, const GaussianRational& c = 1)
    {
        GaussExponent e;
        for (const auto& [gx, cx] : x.terms())
            for (const auto& [gy, cy] : y.terms())
                e.add(gx, gy, c * cx * cy);
        return e;
    }

    /// pi * c * x.
    static GaussExponent linear(const AffineForm& x, const GaussianRational& c = 1)
    {
        return product(x, AffineForm(1), c);
    }

    const std::map<Key, GaussianRational>& terms() const noexcept { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    GaussianRational coefficient(const std::string& g, const std::string& h) const
    {
        auto it = terms_.find(key(g, h));
        return it == terms_.end() ? GaussianRational{} : it->second;
    }

    bool depends_on(const std::string& name) const
    {
        for (const auto& [k, c] : terms_)
            if (k.first == name || k.second == name)
                return true;
        return false;
    }

    GaussExponent& operator+=(const GaussExponent& o)
    {
        for (const auto& [k, c] : o.terms_)
            add(k.first, k.second, c);
        return *this;
    }
    GaussExponent& operator-=(const GaussExponent& o) { return *this += -o; }
    GaussExponent operator-() const
    {
        GaussExponent e = *this;
        for (auto& [k, c] : e.terms_)
            c = -c;
        return e;
    }
    friend GaussExponent operator+(GaussExponent a, const GaussExponent& b) { return a += b; }
    friend GaussExponent operator-(GaussExponent a, const GaussExponent& b) { return a -= b; }

    /// Replaces generator `name` by the affine form `repl`.
    GaussExponent substitute(const std::string& name, const AffineForm& repl) const
    {
        GaussExponent out;
        auto as_form = [&](const std::string& g) { return g == name ? repl : gen(g); };
        for (const auto& [k, c] : terms_) {
            if (k.first != name && k.second != name)
                out.add(k.first, k.second, c);
            else
                out += product(as_form(k.first), as_form(k.second), c);
        }
        return out;
    }

    /// Splits pi * (a v^2 + L v + rest) for the generator v; L has no v term.
    struct Decomposition;
    Decomposition decompose(const std::string& v) const;

    template <class Real>
    Complex<Real> evaluate(const Bindings<Real>& env) const
    {
        Complex<Real> v{};
        for (const auto& [k, c] : terms_)
            v += c.template to_complex<Real>() * env.get(k.first) * env.get(k.second);
        return pi_v<Real> * v;
    }

    friend bool operator==(const GaussExponent& a, const GaussExponent& b) { return a.terms_ == b.terms_; }

    std::string str() const
    {
        if (terms_.empty())
            return "0";
        std::string s = "pi*(";
        bool first = true;
        for (const auto& [k, c] : terms_) {
            if (!first)
                s += " + ";
            first = false;
            s += c.str();
            for (const auto& g : {k.first, k.second})
                if (g != unit_generator)
                    s += "*" + g;
        }
        return s + ")";
    }

private:
    static Key key(const std::string& g, const std::string& h) { return g <= h ? Key{g, h} : Key{h, g}; }

    void add(const std::string& g, const std::string& h, const GaussianRational& c)
    {
        if (c.is_zero())
            return;
        auto [it, inserted] = terms_.try_emplace(key(g, h), c);
        if (!inserted)
            it->second += c;
        if (it->second.is_zero())
            terms_.erase(it);
    }

    std::map<Key, GaussianRational> terms_;
};

struct GaussExponent::Decomposition {
    GaussianRational quadratic;
    AffineForm linear;
    GaussExponent rest;
};

inline GaussExponent::Decomposition GaussExponent::decompose(const std::string& v) const
{
    Decomposition d;
    for (const auto& [k, c] : terms_) {
        if (k.first == v && k.second == v)
            d.quadratic += c;
        else if (k.first == v)
            d.linear += gen(k.second, c);
        else if (k.second == v)
            d.linear += gen(k.first, c);
        else
            d.rest.add(k.first, k.second, c);
    }
    return d;
}

inline std::ostream& operator<<(std::ostream& os, const GaussExponent& e) { return os << e.str(); }

} // namespace qdilog

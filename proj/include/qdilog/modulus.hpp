#pragma once

#include <complex>

#include "qdilog/errors.hpp"
#include "qdilog/numeric.hpp"

namespace qdilog {

/// The deformation parameter b and the constants derived from it.
///
/// zeta_bar is built from the sign-flipped exponent rather than by complex
/// conjugation, so it continues analytically to complex b and agrees with
/// conj(zeta) for real b.
template <class Real = double>
class ModulusParam {
public:
    Complex<Real> b() const noexcept { return b_; }
    Complex<Real> b_inv() const noexcept { return b_inv_; }
    Complex<Real> Q() const noexcept { return Q_; }
    Complex<Real> q() const noexcept { return q_; }
    Complex<Real> q_tilde() const noexcept { return q_tilde_; }
    Complex<Real> zeta() const noexcept { return zeta_; }
    Complex<Real> zeta_bar() const noexcept { return zeta_bar_; }
    /// Exponent of zeta_bar, i.e. a branch of log(zeta_bar) continuous in b.
    Complex<Real> log_zeta_bar() const noexcept { return log_zeta_bar_; }

    /// Im(b^2) > 0: |q| < 1 and both product representations converge.
    bool products_converge() const noexcept { return (b_ * b_).imag() > Real(0); }

    template <class R>
    friend ModulusParam<R> make_modulus(Complex<R> b);

private:
    ModulusParam() = default;

    Complex<Real> b_, b_inv_, Q_, q_, q_tilde_, zeta_, zeta_bar_, log_zeta_bar_;
};

template <class Real>
ModulusParam<Real> make_modulus(Complex<Real> b)
{
    if (!(b.real() > Real(0)))
        throw Error(ErrorKind::invalid_parameter, "Re(b) must be positive");
    const Complex<Real> i = imag_unit<Real>;
    const Real pi = pi_v<Real>;
    ModulusParam<Real> m;
    m.b_ = b;
    m.b_inv_ = Real(1) / b;
    m.Q_ = b + m.b_inv_;
    const Complex<Real> b2 = b * b;
    const Complex<Real> binv2 = m.b_inv_ * m.b_inv_;
    m.q_ = std::exp(i * pi * b2);
    m.q_tilde_ = std::exp(i * pi * binv2);
    const Complex<Real> phase = i * pi / Real(4) + i * pi * (b2 + binv2) / Real(12);
    m.zeta_ = std::exp(phase);
    m.log_zeta_bar_ = -phase;
    m.zeta_bar_ = std::exp(-phase);
    return m;
}

template <class Real>
ModulusParam<Real> make_modulus(Real b)
{
    return make_modulus<Real>(Complex<Real>(b, Real(0)));
}

} // namespace qdilog

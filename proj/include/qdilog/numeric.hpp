#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace qdilog {

template <class Real>
using Complex = std::complex<Real>;

template <class Real>
inline constexpr Real pi_v = std::numbers::pi_v<Real>;

template <class Real>
inline constexpr Complex<Real> imag_unit{Real(0), Real(1)};

/// exp(w) - 1 without cancellation for small |w|.
template <class Real>
Complex<Real> cexpm1(Complex<Real> w)
{
    using std::cos;
    using std::expm1;
    using std::sin;
    const Real x = w.real();
    const Real y = w.imag();
    const Real em1 = expm1(x);
    const Real half = sin(y / 2);
    return {em1 * cos(y) - 2 * half * half, (em1 + 1) * sin(y)};
}

/// 1 - exp(w), accurate near the zeros of the functional-equation factors.
template <class Real>
Complex<Real> one_minus_exp(Complex<Real> w)
{
    return -cexpm1(w);
}

/// Value together with an absolute error estimate.
template <class Real>
struct Estimate {
    Complex<Real> value{};
    Real error = 0;
    Real abs_integral = 0;
    std::size_t evaluations = 0;
};

template <class Real>
Real relative_deviation(Complex<Real> a, Complex<Real> b)
{
    const Real scale = std::max(std::abs(a), std::abs(b));
    if (scale == Real(0))
        return Real(0);
    return std::abs(a - b) / scale;
}

} // namespace qdilog

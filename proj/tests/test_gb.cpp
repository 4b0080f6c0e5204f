#include <gtest/gtest.h>

#include <array>
#include <complex>
#include <random>

#include "qdilog/gb.hpp"

using namespace qdilog;
using C = std::complex<double>;

namespace {

const C I{0, 1};
const double pi = pi_v<double>;

C reflection_rhs(C z, const ModulusParam<double>& m)
{
    return std::exp(pi * I * z * (z - m.Q()));
}

// Points in the fundamental strip avoiding nothing in particular: G_b has no
// poles or zeros there.
std::vector<C> strip_grid(const ModulusParam<double>& m, int nx, int ny, double im_span)
{
    std::vector<C> pts;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            pts.emplace_back(m.Q().real() * (i + 0.5) / nx, -im_span + 2 * im_span * j / (ny - 1));
    return pts;
}

} // namespace

TEST(Modulus, DerivedConstants)
{
    auto m1 = make_modulus(1.0);
    EXPECT_NEAR(std::abs(m1.Q() - C(2)), 0, 1e-15);
    EXPECT_NEAR(std::abs(m1.q() - C(-1)), 0, 1e-15);
    auto m = make_modulus(0.8);
    EXPECT_DOUBLE_EQ(m.Q().real(), 2.05);
    EXPECT_EQ(m.Q().imag(), 0.0);
    EXPECT_NEAR(std::abs(m.zeta() * m.zeta_bar() - C(1)), 0, 1e-15);
    EXPECT_NEAR(std::abs(m.zeta_bar() - std::conj(m.zeta())), 0, 1e-15);
    EXPECT_NEAR(std::abs(m.q()), 1, 1e-15);
    EXPECT_FALSE(m.products_converge());
}

TEST(Modulus, ComplexB)
{
    auto m = make_modulus(C(0.6, 0.1));
    EXPECT_TRUE(m.products_converge());
    EXPECT_LT(std::abs(m.q()), 1);
    EXPECT_GT(std::abs(m.q_tilde()), 1);
    EXPECT_NEAR(std::abs(m.zeta() * m.zeta_bar() - C(1)), 0, 1e-15);
}

TEST(Modulus, RejectsLeftHalfPlane)
{
    EXPECT_THROW(make_modulus(C(0, 1)), Error);
    EXPECT_THROW(make_modulus(-0.5), Error);
    try {
        make_modulus(0.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::invalid_parameter);
    }
}

TEST(Config, Validation)
{
    EvalConfig cfg;
    EXPECT_NO_THROW(validate(cfg));
    cfg.rel_tol = 0;
    EXPECT_THROW(validate(cfg), Error);
    cfg = {};
    cfg.max_refine = 0;
    EXPECT_THROW(validate(cfg), Error);
}

TEST(Lattice, Distances)
{
    auto m = make_modulus(0.8);
    EXPECT_NEAR(pole_distance(C(0), m), 0, 1e-15);
    EXPECT_NEAR(pole_distance(-2.0 * m.b() - m.b_inv(), m), 0, 1e-14);
    EXPECT_NEAR(pole_distance(C(0.1), m), 0.1, 1e-15);
    EXPECT_NEAR(zero_distance(m.Q() + m.b(), m), 0, 1e-14);
    EXPECT_NEAR(zero_distance(m.Q() - 0.2, m), 0.2, 1e-14);
}

TEST(GbStrip, CentreIsUnimodular)
{
    auto m = make_modulus(0.8);
    const auto est = log_gb_strip_estimate(m.Q() / 2.0, m, EvalConfig{});
    EXPECT_LT(std::abs(est.value.real()), 1e-10);
    EXPECT_LT(est.error, 1e-10);
}

TEST(GbStrip, RejectsPointsOutsideStrip)
{
    auto m = make_modulus(0.8);
    EXPECT_THROW(log_gb_strip(C(-0.1), m, EvalConfig{}), Error);
    EXPECT_THROW(log_gb_strip(m.Q() + 0.1, m, EvalConfig{}), Error);
}

TEST(GbStrip, ContourAndTruncationIndependence)
{
    for (double bv : {0.8, 0.6}) {
        auto m = make_modulus(bv);
        for (C z : {C(0.9, 0.3), C(0.3, -1.5), C(1.6, 2.0)}) {
            const auto base = log_gb_strip_estimate(z, m, EvalConfig{});
            const auto small = log_gb_strip_estimate(z, m, EvalConfig{}, {0.5, 1.0});
            const auto longer = log_gb_strip_estimate(z, m, EvalConfig{}, {1.0, 2.0});
            EXPECT_LE(std::abs(base.value - small.value), base.error + small.error) << z;
            EXPECT_LE(std::abs(base.value - longer.value), base.error + longer.error) << z;
        }
    }
}

// Reference values from an independent 30-digit evaluation of the defining
// integral (different contour radius and truncation) plus functional-equation
// shifts by b only.
TEST(GbEval, MatchesHighPrecisionReference)
{
    auto m = make_modulus(0.8);
    const std::array<std::pair<C, C>, 5> ref{{
        {m.Q() / 2.0 + 0.3, {0.082142888541292357282, -1.3264022304088223778}},
        {C(0.3, 0.2), {0.4236070643113332438, -0.90370681765060377377}},
        {C(1.7, -0.6), {-1.21121710203289815, -12.649027649745666931}},
        {C(3.1, 0.4), {0.22168131863851679408, -0.93128148580489919481}},
        {C(-0.45, 0.25), {0.15139763539198036569, -0.79228319116253704255}},
    }};
    for (const auto& [z, v] : ref)
        EXPECT_LT(relative_deviation(gb_eval(z, m, EvalConfig{}), v), 1e-10) << z;
}

TEST(GbEval, FunctionalEquationBothShifts)
{
    auto m = make_modulus(0.8);
    const EvalConfig cfg;
    for (C z : {C(0.4), C(0.3, 0.2), C(-1.1, 0.7), C(2.5, -0.4)}) {
        for (C g : {m.b(), m.b_inv()}) {
            const C lhs = gb_eval(z + g, m, cfg);
            const C rhs = (1.0 - std::exp(2.0 * pi * I * g * z)) * gb_eval(z, m, cfg);
            EXPECT_LT(relative_deviation(lhs, rhs), 10 * cfg.rel_tol) << z << " " << g;
        }
    }
}

TEST(GbEval, ReflectionOnStripGrid)
{
    for (C b : {C(0.8), C(0.6), C(0.6, 0.1)}) {
        auto m = make_modulus(b);
        const EvalConfig cfg;
        for (C z : strip_grid(m, 6, 6, 2.0)) {
            const C prod = gb_eval(z, m, cfg) * gb_eval(m.Q() - z, m, cfg);
            EXPECT_LT(relative_deviation(prod, reflection_rhs(z, m)), 10 * cfg.rel_tol) << b << " " << z;
        }
    }
}

TEST(GbEval, ReductionOrderIndependence)
{
    auto m = make_modulus(0.6);
    const EvalConfig cfg;
    std::mt19937 rng(20240611);
    std::uniform_real_distribution<double> re(-4, 6), im(-2, 2);
    for (int k = 0; k < 20; ++k) {
        const C z{re(rng), im(rng)};
        if (pole_distance(z, m) < 1e-3 || zero_distance(z, m) < 1e-3)
            continue;
        const C a = gb_eval_estimate(z, m, cfg, ReductionOrder::b_first).value;
        const C b = gb_eval_estimate(z, m, cfg, ReductionOrder::binv_first).value;
        EXPECT_LT(relative_deviation(a, b), cfg.rel_tol) << z;
    }
}

TEST(GbEval, StripReductionReconstructsInput)
{
    auto m = make_modulus(0.7);
    const EvalConfig cfg;
    for (C z : {C(5.3, 0.2), C(-3.7, -1.0), C(1.0, 0.0)}) {
        for (auto order : {ReductionOrder::b_first, ReductionOrder::binv_first}) {
            const auto red = reduce_to_strip(z, m, order);
            const C back = red.z0 + double(red.shifts_b) * m.b() + double(red.shifts_binv) * m.b_inv();
            EXPECT_LT(std::abs(back - z), 1e-13);
            EXPECT_GE(red.z0.real(), m.Q().real() / 4);
            EXPECT_LE(red.z0.real(), 3 * m.Q().real() / 4);
            EXPECT_LT(relative_deviation(gb_eval(z, m, cfg), red.correction * gb_eval(red.z0, m, cfg)), 10 * cfg.rel_tol);
        }
    }
}

TEST(GbEval, ZerosArePoles)
{
    auto m = make_modulus(0.8);
    const EvalConfig cfg;
    EXPECT_EQ(gb_eval(m.Q(), m, cfg), C(0));
    EXPECT_EQ(gb_eval(m.Q() + m.b() + 2.0 * m.b_inv(), m, cfg), C(0));
    try {
        gb_eval(-m.b(), m, cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::pole_proximity);
    }
}

TEST(GbEval, VanishesLinearlyAtZero)
{
    auto m = make_modulus(0.8);
    const EvalConfig cfg;
    const C r1 = gb_eval(m.Q() + 1e-4, m, cfg) / 1e-4;
    const C r2 = gb_eval(m.Q() + 1e-5, m, cfg) / 1e-5;
    const C limit = 1.0 / zero_limit(0, 0, m);
    // Simple zero: the slope converges with an O(eps) correction.
    const double d1 = std::abs(r1 - limit), d2 = std::abs(r2 - limit);
    EXPECT_NEAR(d1 / d2, 10.0, 0.1);
    EXPECT_LT(std::abs((10.0 * r2 - r1) / 9.0 - limit), 1e-7);
    const C r3 = gb_eval(m.Q() + 1e-5 * I, m, cfg) / (1e-5 * I);
    EXPECT_LT(std::abs(r3 - limit), 2 * d2);
}

TEST(GbEval, PoleAndZeroLimits)
{
    auto m = make_modulus(0.8);
    const EvalConfig cfg;
    for (auto [n1, n2] : std::array<std::pair<long, long>, 3>{{{0, 0}, {1, 0}, {0, 1}}}) {
        const C shift = double(n1) * m.b() + double(n2) * m.b_inv();
        auto pole_side = [&](double x) { return x * gb_eval(x - shift, m, cfg); };
        auto zero_side = [&](double x) { return x / gb_eval(x + m.Q() + shift, m, cfg); };
        // Both sides are analytic in x with a linear leading correction.
        const C p = (10.0 * pole_side(1e-4) - pole_side(1e-3)) / 9.0;
        const C z = (10.0 * zero_side(1e-4) - zero_side(1e-3)) / 9.0;
        EXPECT_LT(std::abs(p - pole_limit(n1, n2, m)), 1e-6) << n1 << n2;
        EXPECT_LT(std::abs(z - zero_limit(n1, n2, m)), 1e-6) << n1 << n2;
    }
    EXPECT_NEAR(std::abs(pole_limit(0, 0, m) - 1 / (2 * pi)), 0, 1e-16);
    EXPECT_NEAR(std::abs(zero_limit(0, 0, m) + 1 / (2 * pi)), 0, 1e-16);
}

TEST(GbEval, ResonantModulusIsDegenerate)
{
    auto m = make_modulus(1.0);
    try {
        pole_limit(1, 0, m);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::degenerate_parameter);
    }
    EXPECT_NO_THROW(pole_limit(0, 0, m));
}

TEST(GbEval, FuncEqGeneral)
{
    auto m = make_modulus(0.8);
    const EvalConfig cfg;
    const C x = 0.3;
    EXPECT_EQ(func_eq_general(x, 0, 0, m), C(1));
    EXPECT_LT(std::abs(func_eq_general(x, 1, 0, m) - (1.0 - std::exp(2.0 * pi * I * m.b() * x))), 1e-15);
    for (long n1 = 0; n1 <= 2; ++n1)
        for (long n2 = 0; n2 <= 2; ++n2) {
            const C ratio = gb_eval(x + double(n1) * m.b() + double(n2) * m.b_inv(), m, cfg) / gb_eval(x, m, cfg);
            EXPECT_LT(relative_deviation(ratio, func_eq_general(x, n1, n2, m)), 10 * cfg.rel_tol);
        }
    EXPECT_THROW(func_eq_general(x, -1, 0, m), Error);
}

TEST(Asymptotics, UpperAndLowerBranches)
{
    auto m = make_modulus(0.8);
    const EvalConfig cfg;
    const C up = m.Q() / 2.0 + 10.0 * I;
    const C down = m.Q() / 2.0 - 10.0 * I;
    EXPECT_LT(std::abs(gb_eval(up, m, cfg) - m.zeta_bar()), 1e-8);
    EXPECT_LT(relative_deviation(gb_eval(down, m, cfg), gb_asymptotic(down, m)), 1e-8);
    // At Im z = 5 the leading correction is about e^{-2 pi 5 b}.
    const C mid = m.Q() / 2.0 + 5.0 * I;
    const double bound = 2 * std::exp(-2 * pi * 5 * 0.8);
    EXPECT_LT(std::abs(log_gb_strip(mid, m, cfg) - m.log_zeta_bar()), bound);
    for (C z : {C(0.3, 4.0), C(0.7, -3.0)}) {
        for (auto br : {AsymptoticBranch::upper, AsymptoticBranch::lower}) {
            const auto other = br == AsymptoticBranch::upper ? AsymptoticBranch::lower : AsymptoticBranch::upper;
            const C prod = gb_asymptotic(z, m, br) * gb_asymptotic(m.Q() - z, m, other);
            EXPECT_LT(relative_deviation(prod, reflection_rhs(z, m)), 1e-14);
        }
    }
}

TEST(ProductOracle, AgreesWithIntegral)
{
    auto m = make_modulus(C(0.6, 0.1));
    const EvalConfig cfg;
    for (C z : strip_grid(m, 4, 5, 1.5)) {
        const C a = gb_eval(z, m, cfg);
        const C b = gb_product_oracle(z, m, cfg);
        EXPECT_LT(relative_deviation(a, b), 10 * cfg.rel_tol) << z;
    }
}

TEST(ProductOracle, ReflectionAndAvailability)
{
    auto m = make_modulus(C(0.6, 0.1));
    const EvalConfig cfg;
    const C z{0.5, 0.3};
    const C prod = gb_product_oracle(z, m, cfg) * gb_product_oracle(m.Q() - z, m, cfg);
    EXPECT_LT(relative_deviation(prod, reflection_rhs(z, m)), 1e-9);
    try {
        gb_product_oracle(z, make_modulus(0.8), cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::oracle_unavailable);
    }
}

TEST(SmallGb, ShiftRelation)
{
    auto m = make_modulus(0.8);
    const EvalConfig cfg;
    for (double x : {0.3, 1.0, 2.5}) {
        const C lhs = small_gb(C(x) / m.q(), m, cfg);
        const C rhs = (1.0 + x) * small_gb(m.q() * x, m, cfg);
        EXPECT_LT(relative_deviation(lhs, rhs), 10 * cfg.rel_tol) << x;
    }
    EXPECT_LT(relative_deviation(small_gb(C(1), m, cfg), m.zeta_bar() / gb_eval(m.Q() / 2.0, m, cfg)), 1e-15);
    EXPECT_THROW(small_gb(C(0), m, cfg), Error);
}

TEST(SmallGb, ProductForm)
{
    auto m = make_modulus(C(0.6, 0.1));
    const EvalConfig cfg;
    for (C x : {C(0.5), C(2.0, 0.5)}) {
        EXPECT_LT(relative_deviation(small_gb(x, m, cfg), small_gb_product(x, m, cfg)), 1e-9) << x;
    }
}

TEST(Precision, ExtendedScalar)
{
    auto m = make_modulus<long double>(0.8L);
    EvalConfig cfg;
    cfg.rel_tol = 1e-13;
    const std::complex<long double> z{0.3L, 0.2L};
    const auto prod = gb_eval(z, m, cfg) * gb_eval(m.Q() - z, m, cfg);
    const auto rhs = std::exp(pi_v<long double> * imag_unit<long double> * z * (z - m.Q()));
    EXPECT_LT(relative_deviation(prod, rhs), 1e-12L);
}

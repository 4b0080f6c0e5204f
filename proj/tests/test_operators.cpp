#include <gtest/gtest.h>

#include <random>

#include "qdilog/operators.hpp"

using namespace qdilog;
using C = std::complex<double>;
using GR = GaussianRational;

namespace {

const C I{0, 1};

GR random_ratio(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> n(-12, 12), d(1, 9);
    return GR::ratio(n(rng), d(rng));
}

ShiftOp random_op(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> pick(0, 6);
    const GR r = random_ratio(rng);
    switch (pick(rng)) {
    case 0: return make_K_pow(gen("bp", r));
    case 1: return make_E_div(gen("bs", r) + gen("bt"));
    case 2: return make_F_div(gen("bt", r));
    case 3: return weyl_power(Weyl::U1, gen("bs1", r));
    case 4: return weyl_power(Weyl::V1, gen("bs2", r));
    case 5: return weyl_power(Weyl::U2, gen("bt1", r));
    default: return weyl_power(Weyl::V2, gen("bt2", r));
    }
}

Bindings<double> sample_env(const ModulusParam<double>& m)
{
    return {{"u", C(0.1)}, {"alpha", C(0.5)}, {"bs", m.b() * 0.3}, {"bt", m.b() * 0.2}, {"Q", m.Q()}};
}

} // namespace

TEST(ShiftOp, CompositionIsAssociative)
{
    std::mt19937_64 rng(20240611);
    for (int k = 0; k < 40; ++k) {
        const ShiftOp a = random_op(rng), b = random_op(rng), c = random_op(rng);
        EXPECT_TRUE(op_equal_exact(compose(compose(a, b), c), compose(a, compose(b, c))).equal);
        EXPECT_EQ(compose(ShiftOp::identity(), a), a);
        EXPECT_EQ(compose(a, ShiftOp::identity()), a);
    }
}

TEST(ShiftOp, EvaluationHomomorphism)
{
    // (X Y f)(u) = x(u) y(u + shift_X) f(u + shift_X + shift_Y).
    const auto m = make_modulus(0.8);
    const EvalConfig cfg;
    const auto env = sample_env(m);
    const ShiftOp x = make_E_div(), y = make_F_div();
    const ShiftOp xy = compose(x, y);
    Bindings<double> moved = env;
    moved.set("u", env.get("u") + x.shift.evaluate(env));
    const C lhs = xy.symbol.evaluate(env, m, cfg).value;
    const C rhs = x.symbol.evaluate(env, m, cfg).value * y.symbol.evaluate(moved, m, cfg).value;
    EXPECT_LT(std::abs(lhs - rhs), 1e-12 * std::abs(rhs));
    EXPECT_EQ(xy.shift, x.shift + y.shift);
}

TEST(Weyl, OneParameterGroups)
{
    for (Weyl w : {Weyl::U1, Weyl::V1, Weyl::U2, Weyl::V2}) {
        const ShiftOp ab = compose(weyl_power(w, gen("bs1")), weyl_power(w, gen("bs2")));
        EXPECT_TRUE(op_equal_exact(ab, weyl_power(w, gen("bs1") + gen("bs2"))).equal) << to_string(w);
        EXPECT_EQ(compose(weyl_power(w, gen("bs1")), weyl_power(w, -gen("bs1"))), ShiftOp::identity());
    }
}

TEST(Weyl, CommutationScalar)
{
    // U1^{i s} V1^{i r} = e^{-2 pi i (b s)(b r)} V1^{i r} U1^{i s}, and likewise for U2, V2.
    const AffineForm s = gen("bs1"), r = gen("bs2");
    const ShiftOp uv = compose(weyl_power(Weyl::U1, s), weyl_power(Weyl::V1, r));
    const ShiftOp vu = compose(weyl_power(Weyl::V1, r), weyl_power(Weyl::U1, s));
    EXPECT_TRUE(op_equal_exact(uv, scale(gauss_scalar(s, r, imag_ratio(-2)), vu)).equal);
    const ShiftOp uv2 = compose(weyl_power(Weyl::U2, s), weyl_power(Weyl::V2, r));
    const ShiftOp vu2 = compose(weyl_power(Weyl::V2, r), weyl_power(Weyl::U2, s));
    EXPECT_TRUE(op_equal_exact(uv2, scale(gauss_scalar(s, r, imag_ratio(-2)), vu2)).equal);
    // log U2 = -log U1 + const, so U1 and U2 commute; U1 and V2 do not.
    const ShiftOp a = compose(weyl_power(Weyl::U1, s), weyl_power(Weyl::U2, r));
    const ShiftOp b = compose(weyl_power(Weyl::U2, r), weyl_power(Weyl::U1, s));
    EXPECT_TRUE(op_equal_exact(a, b).equal);
    const ShiftOp c = compose(weyl_power(Weyl::U1, s), weyl_power(Weyl::V2, r));
    const ShiftOp d = compose(weyl_power(Weyl::V2, r), weyl_power(Weyl::U1, s));
    EXPECT_TRUE(op_equal_exact(c, scale(gauss_scalar(s, r, imag_ratio(2)), d)).equal);
}

TEST(Generators, EDivMatchesDirectFormula)
{
    const auto m = make_modulus(0.8);
    const EvalConfig cfg;
    const auto env = sample_env(m);
    const C u = env.get("u"), alpha = env.get("alpha"), bs = env.get("bs");
    const C h = m.Q() / 2.0 + I * alpha;
    const C direct = std::exp(pi_v<double> * I * (bs * bs / 2.0 - bs * (u - alpha))) * gb_eval(-I * bs, m, cfg)
        * gb_eval(h + I * bs - I * u, m, cfg) / gb_eval(h - I * u, m, cfg);
    const C sym = make_E_div().symbol.evaluate(env, m, cfg).value;
    EXPECT_LT(std::abs(sym - direct), 1e-12 * std::abs(direct));
    EXPECT_EQ(make_E_div().shift, -gen("bs"));
    EXPECT_EQ(make_F_div().shift, gen("bt"));
}

TEST(Generators, KPowIsMultiplication)
{
    const auto m = make_modulus(0.8);
    Bindings<double> env{{"u", C(0.1)}, {"bp", C(0.4)}};
    const ShiftOp k = make_K_pow();
    EXPECT_TRUE(k.shift.is_constant());
    EXPECT_LT(std::abs(k.symbol.evaluate(env, m, EvalConfig{}).value - std::exp(-2.0 * pi_v<double> * I * 0.4 * 0.1)),
              1e-15);
}

TEST(ExactRelations, Symbolic)
{
    for (const auto& r : {verify_KK(), verify_KE(), verify_KF(), verify_EE(), verify_FF()}) {
        EXPECT_TRUE(r.pass) << r.relation;
        EXPECT_FALSE(r.comparisons.empty());
        for (const auto& [what, d] : r.comparisons)
            EXPECT_TRUE(d.equal) << r.relation << ": " << what << ": " << d.str();
    }
}

TEST(ExactRelations, SeededRationalMultiplesOfB)
{
    std::mt19937_64 rng(20240611);
    for (int k = 0; k < 10; ++k) {
        auto at = [&] { return gen("b", random_ratio(rng)); };
        const AffineForm p1 = at(), p2 = at(), s1 = at(), s2 = at(), t1 = at(), t2 = at();
        EXPECT_TRUE(verify_KK(p1, p2).pass);
        EXPECT_TRUE(verify_KE(p1, s1).pass);
        EXPECT_TRUE(verify_KF(p2, t1).pass);
        EXPECT_TRUE(verify_EE(s1, s2).pass);
        EXPECT_TRUE(verify_FF(t1, t2).pass);
    }
}

TEST(ExactRelations, BrokenGeneratorIsDetected)
{
    // Dropping one factor of E^{(is)} must break E E = ratio * E.
    ShiftOp bad = make_E_div(gen("bs1"));
    bad.symbol.factors.add(gen("bs1", -GR::i()), -1);
    const ShiftOp lhs = compose(bad, make_E_div(gen("bs2")));
    const ShiftOp rhs = scale(divided_power_ratio(gen("bs1"), gen("bs2")), make_E_div(gen("bs1") + gen("bs2")));
    const auto d = op_equal_exact(lhs, rhs);
    EXPECT_FALSE(d.equal);
    EXPECT_TRUE(d.shift_equal);
    EXPECT_FALSE(d.symbol.unmatched_factors.empty());
}

TEST(QBinomial, CoefficientSymmetry)
{
    const AffineForm x = gen("btau"), bs = gen("bs");
    EXPECT_EQ(divided_power_ratio(x, bs - x), divided_power_ratio(bs - x, x));
    const OpIntegral op = q_binomial_integral();
    const ShiftOp weyl = compose(weyl_power(Weyl::U1, bs - x), weyl_power(Weyl::V1, x));
    EXPECT_TRUE(op_equal_exact(op.integrand, scale(divided_power_ratio(x, bs - x), weyl)).equal);
    EXPECT_FALSE(op.integrand.shift.depends_on("btau"));
}

TEST(QBinomial, MatchesEPower)
{
    const auto m = make_modulus(0.8);
    EvalConfig cfg;
    cfg.rel_tol = 1e-8;
    const auto r = q_binomial_E(0.4, 0.5, std::vector<double>{0.1, -0.2}, m, cfg);
    EXPECT_TRUE(r.pass) << r.max_deviation();
    ASSERT_EQ(r.cases.size(), 2u);
    for (const auto& c : r.cases)
        for (const auto& chk : c.checks)
            EXPECT_TRUE(chk.pass) << chk.kind;
}

TEST(Kac, ClosedFormAndReduction)
{
    EXPECT_TRUE(op_equal_exact(kac_lhs(), kac_closed_form()).equal);
    EXPECT_EQ(kac_lhs().shift, gen("bt") - gen("bs"));
    const auto red = kac_six_nine_reduction();
    EXPECT_TRUE(red.factors_match);
    EXPECT_TRUE(red.gauss_match);
    EXPECT_TRUE(red.prefactor_constant);
    EXPECT_TRUE(red.closes_to_lhs) << red.certificate.str();
    const GR i = GR::i();
    EXPECT_EQ(red.A, gen("bs", -i));
    EXPECT_EQ(red.B, gen("bt", -i));
    EXPECT_EQ(red.C, gen("bs", i) - gen("bt", i) - gen("u", 2 * i));
    EXPECT_EQ(red.D, gen("Q", GR::ratio(1, 2)) + gen("alpha", i) + gen("bt", i) + gen("u", i));
}

TEST(Kac, NumericTuple)
{
    const auto m = make_modulus(0.8);
    EvalConfig cfg;
    cfg.rel_tol = 1e-7;
    const auto r = kac_verify(0.3, 0.2, 0.5, std::vector<double>{0.1}, m, cfg);
    EXPECT_TRUE(r.pass) << r.max_deviation();
    for (const auto& [what, ok] : r.exact_checks)
        EXPECT_TRUE(ok) << what;
    EXPECT_LT(r.max_deviation(), 1e-5);
}

TEST(Kac, DegenerateParametersRejected)
{
    const auto m = make_modulus(0.8);
    RepParams p;
    p.s = 0.45;
    p.t = 0.2;
    p.u_samples = {0.1};
    EXPECT_THROW(check_rep_params(p, 0.8), Error);
    p.s = 0;
    EXPECT_THROW(check_rep_params(p, 0.8), Error);
    EXPECT_THROW(kac_verify(0.45, 0.2, 0.5, std::vector<double>{0.1}, m, EvalConfig{}), Error);
}

#include <gtest/gtest.h>

#include "qdilog/contour.hpp"
#include "qdilog/identities.hpp"

using namespace qdilog;
using C = std::complex<double>;
using GR = GaussianRational;

namespace {

const C I{0, 1};

Pole<double> pole(C at, Direction d) { return {at, d, 1}; }

ErrorKind kind_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no qdilog::Error thrown";
    return ErrorKind::invalid_parameter;
}

} // namespace

TEST(PoleSequences, NumeratorFactorGoesUp)
{
    const auto m = make_modulus(0.8);
    IntegrandSpec spec;
    spec.factors.add(gen("alpha") + gen("btau", GR::i()));
    const C alpha{0.3, 0.1};
    const auto seqs = pole_sequences(spec, Bindings<double>{{"alpha", alpha}}, m);
    ASSERT_EQ(seqs.size(), 2u);
    for (const auto& s : seqs) {
        EXPECT_LT(std::abs(s.base - I * alpha), 1e-15);
        EXPECT_EQ(s.direction, Direction::up);
    }
    EXPECT_LT(std::abs(seqs[0].step - I * m.b()), 1e-15);
    EXPECT_LT(std::abs(seqs[1].step - I * m.b_inv()), 1e-15);
}

TEST(PoleSequences, DenominatorFactorGoesDown)
{
    const auto m = make_modulus(0.8);
    IntegrandSpec spec;
    spec.factors.add(gen("Q") + gen("btau", GR::i()), -1);
    const auto seqs = pole_sequences(spec, Bindings<double>{{"Q", m.Q()}}, m);
    ASSERT_EQ(seqs.size(), 2u);
    for (const auto& s : seqs) {
        EXPECT_LT(std::abs(s.base), 1e-15);
        EXPECT_EQ(s.direction, Direction::down);
    }
}

TEST(PoleSequences, ConstantFactorHasNone)
{
    const auto m = make_modulus(0.8);
    IntegrandSpec spec;
    spec.factors.add(gen("alpha"));
    EXPECT_TRUE(pole_sequences(spec, Bindings<double>{{"alpha", C(0.5)}}, m).empty());
}

TEST(PoleSequences, RealStepIsDegenerate)
{
    const auto m = make_modulus(0.8);
    IntegrandSpec spec;
    spec.factors.add(gen("alpha") + gen("btau"));
    EXPECT_EQ(kind_of([&] { pole_sequences(spec, Bindings<double>{{"alpha", C(0.5)}}, m); }),
              ErrorKind::degenerate_parameter);
}

TEST(LocatePoles, TauBinomialPoleAtOriginIsGenuine)
{
    // G(alpha + i x) / G(Q + i x): the denominator zero at x = 0 is not
    // cancelled by the numerator, which is finite there.
    const auto m = make_modulus(0.8);
    const auto spec = tau_binomial_integrand();
    const C alpha = m.Q() / 4.0;
    Bindings<double> env{{"alpha", alpha}, {"beta", alpha}, {"Q", m.Q()}};
    const auto poles = locate_poles(spec, env, m);
    const auto at0 = std::find_if(poles.begin(), poles.end(), [](const auto& p) { return std::abs(p.location) < 1e-12; });
    ASSERT_NE(at0, poles.end());
    EXPECT_EQ(at0->direction, Direction::down);
    EXPECT_EQ(at0->order, 1);

    // Numerically: x f(x) tends to a finite nonzero limit.
    const CompiledIntegrand<double> f(spec, env, m, EvalConfig{});
    const C r1 = 1e-3 * f(C(1e-3));
    const C r2 = 1e-4 * f(C(1e-4));
    EXPECT_GT(std::abs(r2), 1e-3);
    EXPECT_LT(std::abs(r1 - r2), 2e-2 * std::abs(r2));
}

TEST(LocatePoles, MergedFactorsCancel)
{
    // G(z) / G(z + b) = 1 / (1 - e^{2 pi i b z}): simple poles exactly at b z in Z.
    const auto m = make_modulus(0.8);
    IntegrandSpec spec;
    const AffineForm z = gen("alpha") + gen("btau", GR::i());
    spec.factors.add(z).add(z + gen("b"), -1);
    const C c{0.3, 0};
    Bindings<double> env{{"alpha", c}, {"b", m.b()}};
    const auto poles = locate_poles(spec, env, m, 3.0);
    ASSERT_FALSE(poles.empty());
    for (const auto& p : poles) {
        const C zz = c + I * p.location;
        const double n = (m.b() * zz).real();
        EXPECT_LT(std::abs(m.b() * zz - std::round(n)), 1e-9) << p.location;
        EXPECT_EQ(p.order, 1);
        EXPECT_EQ(p.direction, std::round(n) <= 0 ? Direction::up : Direction::down) << p.location;
    }
    // Up poles n <= 0 start at Im x = c, down poles n >= 1 at Im x = c - 1/b;
    // each side is searched to `reach` beyond its first pole.
    int expected = 0;
    for (int n = -10; n <= 10; ++n)
        if ((n <= 0 && -n / m.b().real() <= 3.0) || (n >= 1 && (n - 1) / m.b().real() <= 3.0))
            ++expected;
    EXPECT_EQ(static_cast<int>(poles.size()), expected);
}

TEST(LocatePoles, MixedDirectionsUnsupported)
{
    const auto m = make_modulus(C(0.6, 0.3));
    IntegrandSpec spec;
    // Real coefficient with complex b: arg(b) and arg(1/b) have opposite signs.
    spec.factors.add(gen("alpha") + gen("btau"));
    EXPECT_EQ(kind_of([&] { locate_poles(spec, Bindings<double>{{"alpha", C(0.5)}}, m); }),
              ErrorKind::unsupported_configuration);
}

TEST(PlanContour, SeparatedByRealAxis)
{
    const auto c = plan_contour(std::vector{pole(C(0, 0.5), Direction::up), pole(C(0, -0.5), Direction::down)});
    EXPECT_TRUE(c.separable());
    EXPECT_DOUBLE_EQ(c.baseline, 0.0);
    EXPECT_TRUE(c.indentations.empty());
}

TEST(PlanContour, GapMidpoint)
{
    // Down-going sequence based on the axis, up-going ones from 0.3i: the
    // contour runs above the former and below the latter.
    const auto c = plan_contour(std::vector{pole(C(0, 0), Direction::down), pole(C(1, 0.3), Direction::up),
                                            pole(C(-2, 0.7), Direction::up)});
    EXPECT_TRUE(c.separable());
    EXPECT_NEAR(c.baseline, 0.15, 1e-15);
    EXPECT_TRUE(c.indentations.empty());
}

TEST(PlanContour, OneSidedGaps)
{
    EXPECT_DOUBLE_EQ(plan_contour(std::vector{pole(C(0, 0.7), Direction::up)}).baseline, 0.0);
    EXPECT_DOUBLE_EQ(plan_contour(std::vector{pole(C(0, -0.2), Direction::up)}).baseline, -0.7);
    EXPECT_DOUBLE_EQ(plan_contour(std::vector{pole(C(0, -0.7), Direction::down)}).baseline, 0.0);
    EXPECT_DOUBLE_EQ(plan_contour(std::vector{pole(C(0, 0.2), Direction::down)}).baseline, 0.7);
}

TEST(PlanContour, PinchIsDegenerate)
{
    EXPECT_EQ(kind_of([] {
                  plan_contour(std::vector{pole(C(0, 0), Direction::down), pole(C(0, 0), Direction::up)});
              }),
              ErrorKind::degenerate_parameter);
}

TEST(PlanContour, IndentsOffendingPoles)
{
    // Down pole slightly above an up pole: no horizontal line separates them.
    const auto c = plan_contour(std::vector{pole(C(-1, 0.02), Direction::down), pole(C(1, -0.03), Direction::up)});
    EXPECT_FALSE(c.separable());
    EXPECT_DOUBLE_EQ(c.baseline, 0.0);
    ASSERT_EQ(c.indentations.size(), 2u);
    EXPECT_EQ(c.indentations[0].side, Side::above);
    EXPECT_EQ(c.indentations[1].side, Side::below);
    const double r = std::abs(C(-1, 0.02) - C(1, -0.03)) / 4;
    EXPECT_NEAR(c.indentations[0].radius, std::min(0.5, r), 1e-15);
    EXPECT_GT(c.indentations[1].center.real() - c.indentations[0].center.real(), 2 * c.indentations[0].radius);
}

TEST(PlanContour, FarOffenderUnsupported)
{
    EXPECT_EQ(kind_of([] {
                  plan_contour(std::vector{pole(C(-1, 1.0), Direction::down), pole(C(1, -1.0), Direction::up)});
              }),
              ErrorKind::unsupported_configuration);
}

TEST(PlanContour, FromSequencesUsesBases)
{
    std::vector<PoleSeq<double>> seqs{{C(0, 0.5), C(0, 0.8), Direction::up, 1, "a"},
                                      {C(0, 0.5), C(0, 1.25), Direction::up, 1, "a"},
                                      {C(0, -0.1), C(0, -0.8), Direction::down, -1, "b"}};
    EXPECT_NEAR(plan_contour(seqs).baseline, 0.2, 1e-15);
}

TEST(IntegrateContour, Gaussian)
{
    const auto m = make_modulus(0.8);
    IntegrandSpec spec;
    spec.gauss = GaussExponent::product(gen("btau"), gen("btau"), -2);
    EvalConfig cfg;
    cfg.rel_tol = 1e-10;
    const auto r = integrate_spec(spec, Bindings<double>{}, m, cfg);
    EXPECT_LT(std::abs(r.value - C(std::sqrt(0.5))), 1e-10);
    EXPECT_LT(r.error, 1e-9);
    EXPECT_GT(r.contour.truncation(), 1.0);
}

TEST(IntegrateContour, GrowingIntegrandRejected)
{
    const auto m = make_modulus(0.8);
    IntegrandSpec spec;
    spec.gauss = GaussExponent::product(gen("btau"), gen("btau"), 2);
    EXPECT_EQ(kind_of([&] { integrate_spec(spec, Bindings<double>{}, m, EvalConfig{}); }),
              ErrorKind::tail_non_decaying);
}

TEST(IntegrateContour, IndentedContourAgreesWithShiftedLine)
{
    // Tau-binomial integrand: the planned contour is a straight line in the
    // gap; the real axis with a detour above the pole at 0 must agree.
    const auto m = make_modulus(0.8);
    EvalConfig cfg;
    cfg.rel_tol = 1e-9;
    const auto spec = tau_binomial_integrand();
    Bindings<double> env{{"alpha", m.Q() / 3.0}, {"beta", m.Q() / 5.0}, {"Q", m.Q()}};
    const CompiledIntegrand<double> f(spec, env, m, inner_config(cfg));
    const auto planned = plan_contour(locate_poles(spec, env, m), cfg);
    ASSERT_TRUE(planned.separable());
    const auto straight = integrate_contour(f, planned, cfg);

    ContourSpec<double> detour;
    detour.indentations.push_back({C(0, 0), 0.1, Side::above});
    const auto indented = integrate_contour(f, detour, cfg);
    EXPECT_LT(std::abs(straight.value - indented.value), straight.error + indented.error);
    EXPECT_LT(std::abs(straight.value - indented.value), 1e-9 * std::abs(straight.value));

    // Passing below the down-going pole picks up its residue instead.
    ContourSpec<double> wrong;
    wrong.indentations.push_back({C(0, 0), 0.1, Side::below});
    const auto off = integrate_contour(f, wrong, cfg);
    EXPECT_GT(std::abs(off.value - straight.value), 1e-3 * std::abs(straight.value));
}

TEST(IntegrateContour, ConsistencyChecksPass)
{
    const auto m = make_modulus(0.8);
    EvalConfig cfg;
    cfg.rel_tol = 1e-8;
    const auto spec = tau_binomial_integrand();
    Bindings<double> env{{"alpha", m.Q() / 4.0}, {"beta", m.Q() / 4.0}, {"Q", m.Q()}};
    const CompiledIntegrand<double> f(spec, env, m, inner_config(cfg));
    const auto r = integrate_contour(f, plan_contour(locate_poles(spec, env, m), cfg), cfg);
    const auto shift = check_contour_independence(f, r, cfg);
    const auto doubling = check_truncation_doubling(f, r, cfg);
    EXPECT_EQ(shift.kind, "baseline_shift");
    EXPECT_TRUE(shift.pass) << shift.deviation << " > " << shift.allowed;
    EXPECT_TRUE(doubling.pass) << doubling.deviation << " > " << doubling.allowed;
}

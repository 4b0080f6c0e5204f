// Builds E^(is) F^(it), prints its normal form and checks it against the
// contour integral at a few points u.
#include <qdilog/operators.hpp>

#include <cstdio>
#include <vector>

int main()
{
    using namespace qdilog;
    const ShiftOp ef = kac_lhs();
    std::printf("shift: %s\nsymbol: %s\n", ef.shift.str().c_str(), ef.symbol.str().c_str());

    const auto m = make_modulus(0.8);
    EvalConfig cfg;
    cfg.rel_tol = 1e-8;
    const auto r = kac_verify(0.3, 0.2, 0.5, std::vector<double>{0.1, -0.15, 0.25}, m, cfg);
    for (const auto& c : r.cases)
        std::printf("u=%5.2f  rel dev %.2e  %s\n", c.u, c.rel_deviation, c.pass ? "ok" : "FAIL");
    return r.pass ? 0 : 1;
}

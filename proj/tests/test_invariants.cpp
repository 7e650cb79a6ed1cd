#include <doctest.h>

#include <cmath>
#include <random>

#include "qls/invariants.hpp"
#include "testutil.hpp"

using namespace qls;

namespace {

AbelEquation const_eq(double a0, double a1, double a2, double a3) {
    return AbelEquation(3, {TFunc::constant(a0), TFunc::constant(a1), TFunc::constant(a2),
                            TFunc::constant(a3)});
}

}  // namespace

TEST_CASE("phi3 on constant equations") {
    CHECK(phi3(const_eq(1, 1, 1, 1), 0.7) == doctest::Approx(-20.0 / 9).epsilon(1e-12));
    CHECK(phi3(const_eq(1, 0, 0, 1), 0.0) == doctest::Approx(-3.0));
    // every term carries A0 or A2
    AbelEquation odd(3, {TFunc::constant(0), TFunc::parse("sin(t)+2"), TFunc::constant(0),
                         TFunc::parse("exp(t)")});
    CHECK(phi3(odd, 0.4) == doctest::Approx(0.0));
}

TEST_CASE("dphi3 and phi5 on constant equations") {
    CHECK(dphi3(const_eq(1, 1, 1, 1), 0.2) == doctest::Approx(0.0));
    CHECK(phi5(const_eq(1, 1, 1, 1), 0.2) == doctest::Approx(-40.0 / 9).epsilon(1e-12));
    CHECK(phi5(const_eq(1, 0, 0, 1), 0.2) == doctest::Approx(0.0));
}

TEST_CASE("liouville F values and undefined case") {
    InvariantValue v = liouville_F(const_eq(1, 1, 1, 1), 0.0);
    REQUIRE(v.F.has_value());
    CHECK(*v.F == doctest::Approx(50.0 / 81).epsilon(1e-12));

    // pushed by the constant dilation (0,2): coefficients (1/2, 1, 2, 4)
    AbelEquation pushed = act_pointwise(const_eq(1, 1, 1, 1), GroupElement(0, 2));
    InvariantValue w = liouville_F(pushed, 0.0);
    CHECK(w.phi3 == doctest::Approx(-160.0 / 9).epsilon(1e-12));
    CHECK(w.phi5 == doctest::Approx(-1280.0 / 9).epsilon(1e-12));
    REQUIRE(w.F.has_value());
    CHECK(*w.F == doctest::Approx(50.0 / 81).epsilon(1e-12));

    InvariantValue u = liouville_F(const_eq(1, 0, 0, 1), 0.0);
    CHECK(!u.F.has_value());
}

TEST_CASE("apply_D: constants, Leibniz, finite differences") {
    Grid grid{0.0, 1.0, 17};
    auto dvals = apply_D(const_eq(1, 1, 1, 1), grid.points());
    for (const auto& d : dvals) {
        REQUIRE(d.has_value());
        CHECK(std::abs(*d) < 1e-12);
    }

    AbelEquation eq(3, {TFunc::constant(1), TFunc::constant(1), TFunc::constant(1),
                        TFunc::parse("exp(t)")});
    // derivation property on the product F*F
    for (double t : {0.1, 0.6}) {
        Jet fj = liouville_F_jet(eq, t, 1);
        Jet sq = fj * fj;
        CHECK(std::abs(sq[1] - 2 * fj[0] * fj[1]) <= 1e-9 * (1.0 + std::abs(sq[1])));
    }
    // jets against finite differences of F
    auto at = [&](double t) { return *liouville_F(eq, t).F; };
    auto dv = apply_D(eq, {0.0});
    REQUIRE(dv[0].has_value());
    double h = 1e-5;
    double fd = (at(h) - at(-h)) / (2 * h);
    CHECK(std::abs(*dv[0] - fd) <= 1e-6 * (1.0 + std::abs(fd)));

    // undefined anywhere poisons the grid
    auto poisoned = apply_D(const_eq(1, 0, 0, 1), grid.points());
    for (const auto& d : poisoned) CHECK(!d.has_value());
}

TEST_CASE("F depends only on the 2-jet of the coefficients") {
    // perturb a coefficient by (t - t0)^3: same 2-jet at t0, same F there
    double t0 = 0.5;
    AbelEquation base(3, {TFunc::parse("1+t"), TFunc::parse("sin(t)"), TFunc::parse("2"),
                          TFunc::parse("1+t^2")});
    TFunc bump = TFunc::parse("(t-0.5)^3*7");
    AbelEquation wiggled(3, {base.coeffs[0] + bump, base.coeffs[1], base.coeffs[2] + bump,
                             base.coeffs[3]});
    InvariantValue a = liouville_F(base, t0);
    InvariantValue b = liouville_F(wiggled, t0);
    REQUIRE(a.F.has_value());
    REQUIRE(b.F.has_value());
    CHECK(*a.F == doctest::Approx(*b.F).epsilon(1e-12));
    CHECK(a.phi3 == doctest::Approx(b.phi3).epsilon(1e-12));
    CHECK(a.phi5 == doctest::Approx(b.phi5).epsilon(1e-12));
}

TEST_CASE("group invariance of F on random pairs") {
    std::mt19937_64 rng(5150);
    Grid grid{0.0, 1.0, 10};
    int checked = 0;
    for (int trial = 0; trial < 25; ++trial) {
        AbelEquation eq = qlstest::random_abel(rng);
        GroupCurve g = qlstest::random_curve(rng, 0.3);
        AbelEquation pushed = pushforward(eq, g);
        for (double t : grid.points()) {
            InvariantValue a = liouville_F(eq, t);
            InvariantValue b = liouville_F(pushed, t);
            CHECK(a.F.has_value() == b.F.has_value());
            if (a.F && b.F) {
                CHECK(std::abs(*a.F - *b.F) <= 1e-7 * (1.0 + std::abs(*a.F)));
                ++checked;
            }
        }
    }
    CHECK(checked > 100);  // the sampling actually exercised defined values
}

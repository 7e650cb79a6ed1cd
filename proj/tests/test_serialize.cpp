#include <doctest.h>

#include <random>

#include "qls/serialize.hpp"
#include "testutil.hpp"

using namespace qls;
using nlohmann::json;

TEST_CASE("vector field JSON round trip") {
    auto z = planar_cubic_basis();
    for (const auto& f : z) {
        json j = to_json(f);
        CHECK(polyvf_from_json(j) == f);
    }
    PolyVF y2 = PolyVF::monomial1d(2, rat(3, 7));
    CHECK(polyvf_from_json(to_json(y2)) == y2);

    // flat single-component shape accepted on the line
    json flat = {{"dim", 1}, {"components", json::array({json::array({json::array({2}), 3, 7})})}};
    CHECK(polyvf_from_json(flat) == y2);

    CHECK_THROWS_AS(polyvf_from_json(json{{"dim", 3}, {"components", json::array()}}), SchemaError);
    CHECK_THROWS_AS(polyvf_from_json(json{{"dim", 1}}), SchemaError);
}

TEST_CASE("scheme JSON round trip") {
    SchemeSpec s = abel_scheme(3);
    SchemeSpec back = scheme_from_json(to_json(s));
    CHECK(back.v_basis.size() == 4);
    CHECK(back.w_basis.size() == 2);
    for (size_t i = 0; i < 4; ++i) CHECK(back.v_basis[i] == s.v_basis[i]);
    CHECK(check_scheme(back).ok());
}

TEST_CASE("equation and curve JSON round trips evaluate identically") {
    std::mt19937_64 rng(424242);
    for (int trial = 0; trial < 10; ++trial) {
        AbelEquation eq = qlstest::random_abel(rng);
        AbelEquation back = abel_from_json(to_json(eq));
        GroupCurve g = qlstest::random_curve(rng);
        GroupCurve gback = curve_from_json(to_json(g));
        for (double t : {0.0, 0.3, 0.9}) {
            for (int k = 0; k <= 3; ++k)
                CHECK(back.coeffs[k].eval(t) == doctest::Approx(eq.coeffs[k].eval(t)).epsilon(1e-15));
            CHECK(gback.alpha.eval(t) == doctest::Approx(g.alpha.eval(t)).epsilon(1e-15));
            CHECK(gback.beta.eval(t) == doctest::Approx(g.beta.eval(t)).epsilon(1e-15));
        }
    }
    CHECK_THROWS_AS(abel_from_json(json{{"q", 3}}), SchemaError);
    CHECK_THROWS_AS(abel_from_json(json{{"q", 3}, {"coeffs", json::array({"1", "2"})}}), SchemaError);
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "qls/invariants.hpp"
#include "qls/jetgeom.hpp"
#include "testutil.hpp"

using namespace qls;

namespace {

SchemeJets abel_jets() { return SchemeJets(abel_scheme(3)); }

Poly lam(const JetSpace& s, int k, int level, long c = 1) {
    return Poly::var(s.dim(), s.coord(level, k)).scaled(rat(c));
}

}  // namespace

TEST_CASE("J-lifts reproduce the displayed jet fields") {
    SchemeJets sj = abel_jets();
    JetSpace s{4, 2};

    // sum over levels of (lam1 d/dlam0 + 2 lam2 d/dlam1 + 3 lam3 d/dlam2)
    JetVF expect1 = JetVF::zero(s);
    for (int a = 0; a <= 2; ++a) {
        expect1.comp[s.coord(a, 0)] += lam(s, 1, a);
        expect1.comp[s.coord(a, 1)] += lam(s, 2, a, 2);
        expect1.comp[s.coord(a, 2)] += lam(s, 3, a, 3);
    }
    CHECK(sj.lift_J(0, 2) == expect1);

    // sum over levels of (-lam0 d/dlam0 + lam2 d/dlam2 + 2 lam3 d/dlam3)
    JetVF expect2 = JetVF::zero(s);
    for (int a = 0; a <= 2; ++a) {
        expect2.comp[s.coord(a, 0)] += lam(s, 0, a, -1);
        expect2.comp[s.coord(a, 2)] += lam(s, 2, a);
        expect2.comp[s.coord(a, 3)] += lam(s, 3, a, 2);
    }
    CHECK(sj.lift_J(1, 2) == expect2);

    CHECK(bracket(sj.lift_J(0, 2), sj.lift_J(1, 2)) == scaled(sj.lift_J(0, 2), -1));
}

TEST_CASE("T-lifts are constant insertions at the top level") {
    SchemeJets sj = abel_jets();
    JetSpace s2{4, 2};
    JetVF t0 = JetVF::zero(s2);
    t0.comp[s2.coord(2, 0)] = Poly::constant(s2.dim(), 1);
    CHECK(sj.lift_T(0, 2) == t0);

    JetSpace s1{4, 1};
    JetVF t1 = JetVF::zero(s1);
    t1.comp[s1.coord(1, 1)] = Poly::constant(s1.dim(), 1);
    CHECK(sj.lift_T(1, 1) == t1);

    CHECK(bracket(sj.lift_T(0, 2), sj.lift_T(1, 2)) == JetVF::zero(s2));
}

TEST_CASE("theta fields match their displayed forms") {
    SchemeJets sj = abel_jets();
    JetSpace s{4, 2};

    JetVF th2x1 = JetVF::zero(s);
    th2x1.comp[s.coord(1, 0)] = Poly::constant(s.dim(), 1);
    th2x1.comp[s.coord(2, 0)] = lam(s, 1, 0, -1);
    th2x1.comp[s.coord(2, 1)] = lam(s, 2, 0, -2);
    th2x1.comp[s.coord(2, 2)] = lam(s, 3, 0, -3);
    CHECK(sj.theta2(0) == th2x1);

    JetVF th1x1 = JetVF::zero(s);
    th1x1.comp[s.coord(0, 0)] = Poly::constant(s.dim(), 1);
    th1x1.comp[s.coord(1, 0)] = lam(s, 1, 0, -1);
    th1x1.comp[s.coord(1, 1)] = lam(s, 2, 0, -2);
    th1x1.comp[s.coord(1, 2)] = lam(s, 3, 0, -3);
    th1x1.comp[s.coord(2, 0)] = lam(s, 1, 1, -2);
    th1x1.comp[s.coord(2, 1)] = lam(s, 2, 1, -4);
    th1x1.comp[s.coord(2, 2)] = lam(s, 3, 1, -6);
    CHECK(sj.theta1(0) == th1x1);
}

TEST_CASE("the ten commutation identities hold exactly") {
    SchemeJets sj = abel_jets();
    JetVF J1 = sj.lift_J(0, 2), J2 = sj.lift_J(1, 2);
    JetVF T1 = sj.lift_T(0, 2), T2 = sj.lift_T(1, 2);
    JetVF H21 = sj.theta2(0), H22 = sj.theta2(1);
    JetVF H11 = sj.theta1(0), H12 = sj.theta1(1);

    CHECK(bracket(J1, J2) == scaled(J1, -1));
    CHECK(bracket(J1, T2) == scaled(T1, -1));
    CHECK(bracket(J2, T1) == T1);
    CHECK(bracket(H21, J2) == scaled(H21, -1));
    CHECK(bracket(H22, J1) == H21);
    CHECK(bracket(H11, H12) == scaled(H21, 2));
    CHECK(bracket(H11, J2) == scaled(H11, -1));
    CHECK(bracket(H11, H22) == scaled(T1, 3));
    CHECK(bracket(H12, J1) == H11);
    CHECK(bracket(H12, H21) == scaled(T1, -3));
    // and the vanishing companions
    CHECK(bracket(H21, H22) == JetVF::zero(H21.space));
    CHECK(bracket(J1, T1) == JetVF::zero(J1.space));
    CHECK(bracket(J2, T2) == JetVF::zero(J2.space));
}

TEST_CASE("order-one field set") {
    SchemeJets sj = abel_jets();
    auto fields = sj.order1_fields();
    CHECK(fields.size() == 8);

    // zflow(1) matches -d/dlam1^0 - lam0^0 d/dlam0^1 + lam2^0 d/dlam2^1 + 2 lam3^0 d/dlam3^1
    JetSpace s{4, 1};
    JetVF z2 = JetVF::zero(s);
    z2.comp[s.coord(0, 1)] = Poly::constant(s.dim(), -1);
    z2.comp[s.coord(1, 0)] = lam(s, 0, 0, -1);
    z2.comp[s.coord(1, 2)] = lam(s, 2, 0);
    z2.comp[s.coord(1, 3)] = lam(s, 3, 0, 2);
    CHECK(sj.zflow(1) == z2);

    // The adjoined brackets with matching W index vanish identically, and the
    // crossed ones fall back into the span: [z0, J1] = -z0, [z1, J0] = z0-type.
    auto cands = sj.order1_bracket_candidates();  // row-major in (zflow i, lift j)
    CHECK(cands[0] == JetVF::zero(s));            // [z0, J0]
    CHECK(cands[3] == JetVF::zero(s));            // [z1, J1]
    CHECK(cands[1] == scaled(sj.zflow(0), -1));   // [z0, J1]
    CHECK(cands[2] == sj.zflow(0));               // [z1, J0]
}

TEST_CASE("order-zero field set") {
    SchemeJets sj = abel_jets();
    auto fields = sj.order0_fields();
    CHECK(fields.size() == 4);
    auto ranks = distribution_rank(fields, sample_points(4, 50, 77));
    for (int r : ranks) CHECK(r == 4);
}

TEST_CASE("distribution ranks at random and degenerate points") {
    SchemeJets sj = abel_jets();

    auto pts12 = sample_points(12, 50, 2024);
    auto ranks2 = distribution_rank(sj.order2_fields(), pts12);
    for (int r : ranks2) CHECK(r == 8);

    // at the origin only the constant parts survive: both T lifts plus the
    // constant parts of the two theta2 and two theta1 fields, six in all
    auto zero_rank = distribution_rank(sj.order2_fields(), {JetPoint(12, 0.0)});
    CHECK(zero_rank[0] == 6);

    // order one: the span closes under brackets, so the generic rank is six,
    // not eight, for every bracket-adjunction variant.
    auto pts8 = sample_points(8, 50, 2025);
    auto ranks1 = distribution_rank(sj.order1_fields(), pts8);
    for (int r : ranks1) CHECK(r == 6);
    auto base = sj.order1_base_fields();
    auto all4 = base;
    for (const auto& b : sj.order1_bracket_candidates()) all4.push_back(b);
    auto ranks_all = distribution_rank(all4, pts8);
    for (int r : ranks_all) CHECK(r == 6);

    CHECK_THROWS_AS(distribution_rank({}, pts8), std::invalid_argument);
}

TEST_CASE("involutivity of the order-two fields at sampled points") {
    SchemeJets sj = abel_jets();
    auto fields = sj.order2_fields();
    auto enlarged = fields;
    for (size_t i = 0; i < fields.size(); ++i)
        for (size_t j = i + 1; j < fields.size(); ++j)
            enlarged.push_back(bracket(fields[i], fields[j]));
    auto pts = sample_points(12, 20, 31337);
    auto r1 = distribution_rank(fields, pts);
    auto r2 = distribution_rank(enlarged, pts);
    CHECK(r1 == r2);
}

TEST_CASE("liouville ratio is a first integral of the order-two fields") {
    SchemeJets sj = abel_jets();
    JetSpace s{4, 2};
    auto pts = sample_points(12, 100, 99);
    double worst = first_integral_check(liouville_ratio(s), sj.order2_fields(), pts);
    CHECK(worst <= 1e-9);

    // a coordinate function is not invariant: theta1(0) has a constant
    // d/dlam0^0 part, so the derivative is 1 against unit scale
    PowerRatio coord{Poly::var(s.dim(), s.coord(0, 0)), 1, Poly::constant(s.dim(), 1), 1};
    double nonzero = first_integral_check(coord, {sj.theta1(0)}, pts);
    CHECK(nonzero > 0.1);

    PowerRatio constant{Poly::constant(s.dim(), 3), 1, Poly::constant(s.dim(), 1), 1};
    CHECK(first_integral_check(constant, sj.order2_fields(), pts) == 0.0);
}

TEST_CASE("phi3^2 / f3^3 is an order-one invariant (kills all fields)") {
    SchemeJets sj = abel_jets();
    // as a function of 1-jet data it must kill the six order-one generators...
    JetSpace s1{4, 1};
    PowerRatio f1{phi3_poly(s1), 2, pow(Poly::var(s1.dim(), s1.coord(0, 3)), 3), 1};
    CHECK(first_integral_check(f1, sj.order1_base_fields(), sample_points(8, 100, 555)) <= 1e-9);
    // ...and, read on 2-jet data, the eight order-two fields as well
    JetSpace s2{4, 2};
    PowerRatio f2{phi3_poly(s2), 2, pow(Poly::var(s2.dim(), s2.coord(0, 3)), 3), 1};
    CHECK(first_integral_check(f2, sj.order2_fields(), sample_points(12, 100, 556)) <= 1e-9);
}

TEST_CASE("invariant counts") {
    SchemeJets sj = abel_jets();
    CHECK(invariant_count(sj, 2, 50, 11) == 4);
    CHECK(invariant_count(sj, 0, 50, 13) == 0);
    // the order-one distribution has corank two (see the rank test above)
    CHECK(invariant_count(sj, 1, 50, 12) == 2);
}

TEST_CASE("lambda-polynomial path agrees with the jet path") {
    std::mt19937_64 rng(8888);
    JetSpace s{4, 2};
    Poly p3 = phi3_poly(s), p5 = phi5_poly(s), dp3 = dphi3_poly(s);
    for (int trial = 0; trial < 20; ++trial) {
        AbelEquation eq = qlstest::random_abel(rng);
        double t = qlstest::uni(rng, 0.0, 1.0);
        JetPoint pt = jet_point(eq, t, 2);
        InvariantValue v = liouville_F(eq, t);
        CHECK(std::abs(p3.eval(pt) - v.phi3) <= 1e-9 * (1.0 + std::abs(v.phi3)));
        CHECK(std::abs(dp3.eval(pt) - v.dphi3) <= 1e-9 * (1.0 + std::abs(v.dphi3)));
        CHECK(std::abs(p5.eval(pt) - v.phi5) <= 1e-9 * (1.0 + std::abs(v.phi5)));
    }
}

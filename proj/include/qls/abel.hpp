#pragma once

#include <stdexcept>
#include <vector>

#include "qls/numerics.hpp"
#include "qls/tfunc.hpp"

namespace qls {

// dx/dt = f_0(t) + f_1(t) x + ... + f_q(t) x^q.  q = 2 is the Riccati case.
struct AbelEquation {
    int q = 3;
    std::vector<TFunc> coeffs;  // f_0 .. f_q

    AbelEquation() = default;
    AbelEquation(int q_, std::vector<TFunc> coeffs_);

    double rhs(double t, double x) const;
    Rhs rhs_fn() const;
    std::vector<Jet> coeff_jets(double t, int K) const;
};

// Element (beta, alpha) of the affine group on the line, alpha != 0,
// composition (beta,alpha)*(beta',alpha') = (alpha beta' + beta, alpha alpha').
struct GroupElement {
    double beta = 0.0;
    double alpha = 1.0;
    GroupElement() = default;
    GroupElement(double b, double a) : beta(b), alpha(a) {
        if (a == 0.0) throw std::invalid_argument("group element with alpha = 0");
    }
};

GroupElement compose(const GroupElement& g, const GroupElement& h);
GroupElement inverse(const GroupElement& g);

// Curve (beta(t), alpha(t)) encoding the change of variables x = alpha(t) xbar + beta(t).
// alpha must not vanish on the working window; checked on evaluation grids.
struct GroupCurve {
    TFunc beta;
    TFunc alpha;
    GroupElement at(double t) const { return GroupElement(beta.eval(t), alpha.eval(t)); }
};

GroupCurve identity_curve();
GroupCurve constant_curve(const GroupElement& g);
// Pointwise product curve: product(a, b)(t) = a(t) * b(t).
GroupCurve curve_product(const GroupCurve& a, const GroupCurve& b);
GroupCurve curve_inverse(const GroupCurve& a);

// Transformed equation for xbar under x = alpha(t) xbar + beta(t); coefficients
// are built as expression trees, so the result evaluates to jets like any other
// equation. Only cubic equations (q = 3) are supported.
AbelEquation pushforward(const AbelEquation& eq, const GroupCurve& g);

// Pushforward by a constant group element; no derivative terms appear.
AbelEquation act_pointwise(const AbelEquation& eq, const GroupElement& g0);

struct BlowUpError : std::runtime_error {
    explicit BlowUpError(double t)
        : std::runtime_error("solution blow-up at t = " + std::to_string(t)), time(t) {}
    double time;
};

// Integrates xbar under pushforward(eq, g), maps back via x = alpha xbar + beta
// and returns the max grid residual of x against the original equation.
double flow_conjugacy_residual(const AbelEquation& eq, const GroupCurve& g, double xbar0,
                               double t0, double t1, int steps = 2048);

double residual(const std::vector<double>& t, const std::vector<double>& x,
                const AbelEquation& eq);

}  // namespace qls

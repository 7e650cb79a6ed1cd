#include "qls/abel.hpp"

namespace qls {

AbelEquation::AbelEquation(int q_, std::vector<TFunc> coeffs_) : q(q_), coeffs(std::move(coeffs_)) {
    if (q < 2) throw std::invalid_argument("abel equation needs q >= 2");
    if (coeffs.size() != static_cast<size_t>(q) + 1)
        throw std::invalid_argument("abel equation needs q+1 coefficients");
}

double AbelEquation::rhs(double t, double x) const {
    double s = 0.0;
    for (int k = q; k >= 0; --k) s = s * x + coeffs[k].eval(t);
    return s;
}

Rhs AbelEquation::rhs_fn() const {
    AbelEquation self = *this;
    return [self](double t, double x) { return self.rhs(t, x); };
}

std::vector<Jet> AbelEquation::coeff_jets(double t, int K) const {
    std::vector<Jet> out;
    out.reserve(coeffs.size());
    for (const auto& f : coeffs) out.push_back(f.eval_jet(t, K));
    return out;
}

GroupElement compose(const GroupElement& g, const GroupElement& h) {
    return GroupElement(g.alpha * h.beta + g.beta, g.alpha * h.alpha);
}

GroupElement inverse(const GroupElement& g) { return GroupElement(-g.beta / g.alpha, 1.0 / g.alpha); }

GroupCurve identity_curve() { return {TFunc::constant(0.0), TFunc::constant(1.0)}; }

GroupCurve constant_curve(const GroupElement& g) {
    return {TFunc::constant(g.beta), TFunc::constant(g.alpha)};
}

GroupCurve curve_product(const GroupCurve& a, const GroupCurve& b) {
    return {a.alpha * b.beta + a.beta, a.alpha * b.alpha};
}

GroupCurve curve_inverse(const GroupCurve& a) {
    return {-(a.beta / a.alpha), TFunc::constant(1.0) / a.alpha};
}

AbelEquation pushforward(const AbelEquation& eq, const GroupCurve& g) {
    if (eq.q != 3) throw std::invalid_argument("pushforward: only q = 3 is supported");
    const TFunc& f0 = eq.coeffs[0];
    const TFunc& f1 = eq.coeffs[1];
    const TFunc& f2 = eq.coeffs[2];
    const TFunc& f3 = eq.coeffs[3];
    const TFunc& b = g.beta;
    const TFunc& a = g.alpha;

    TFunc fb3 = f3 * a.pow(2);
    TFunc fb2 = a * (f2 + 3.0 * (f3 * b));
    TFunc fb1 = 3.0 * (f3 * b.pow(2)) + 2.0 * (f2 * b) + f1 - a.derivative() / a;
    TFunc fb0 = (f3 * b.pow(3) + f2 * b.pow(2) + f1 * b + f0 - b.derivative()) / a;
    return AbelEquation(3, {fb0, fb1, fb2, fb3});
}

AbelEquation act_pointwise(const AbelEquation& eq, const GroupElement& g0) {
    return pushforward(eq, constant_curve(g0));
}

double flow_conjugacy_residual(const AbelEquation& eq, const GroupCurve& g, double xbar0,
                               double t0, double t1, int steps) {
    AbelEquation pushed = pushforward(eq, g);
    OdeSolution sol = integrate(pushed.rhs_fn(), xbar0, t0, t1, steps);
    if (sol.blew_up) throw BlowUpError(sol.blowup_time);
    std::vector<double> x(sol.x.size());
    for (size_t i = 0; i < sol.x.size(); ++i) {
        GroupElement gt = g.at(sol.t[i]);
        x[i] = gt.alpha * sol.x[i] + gt.beta;
    }
    return residual(sol.t, x, eq);
}

double residual(const std::vector<double>& t, const std::vector<double>& x,
                const AbelEquation& eq) {
    return residual(t, x, eq.rhs_fn());
}

}  // namespace qls

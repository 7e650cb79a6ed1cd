#include "qls/invariants.hpp"

#include <cmath>
#include <stdexcept>

#include "qls/tolerances.hpp"

namespace qls {

namespace {

// phi3 from coefficient jets, one order below the inputs.
Jet phi3_from_jets(const std::vector<Jet>& A) {
    int m = A[0].order() - 1;
    Jet a0 = A[0].truncated(m), a1 = A[1].truncated(m), a2 = A[2].truncated(m), a3 = A[3].truncated(m);
    Jet a2dot = A[2].shifted(), a3dot = A[3].shifted();
    return a3dot * a2 - a3 * a2dot - 3.0 * (a0 * a3 * a3) + a1 * a2 * a3 -
           (2.0 / 9.0) * (a2 * a2 * a2);
}

// Same quantity as a first-order polynomial in the coefficient jets.
double dphi3_expanded(const std::vector<Jet>& A) {
    auto l = [&](int k, int j) { return A[k][j]; };
    return l(3, 2) * l(2, 0) - l(3, 0) * l(2, 2) - 3 * l(0, 1) * l(3, 0) * l(3, 0) -
           6 * l(0, 0) * l(3, 0) * l(3, 1) + l(1, 1) * l(2, 0) * l(3, 0) +
           l(1, 0) * l(2, 1) * l(3, 0) + l(1, 0) * l(2, 0) * l(3, 1) -
           (2.0 / 3.0) * l(2, 0) * l(2, 0) * l(2, 1);
}

Jet phi5_from_jets(const std::vector<Jet>& A) {
    Jet p3 = phi3_from_jets(A);
    int m = p3.order() - 1;
    Jet dp3 = p3.shifted();
    Jet a1 = A[1].truncated(m), a2 = A[2].truncated(m), a3 = A[3].truncated(m);
    Jet a3dot = A[3].shifted().truncated(m);
    return -(a3 * dp3) - 3.0 * ((-a3dot) + (1.0 / 3.0) * (a2 * a2) - a1 * a3) * p3.truncated(m);
}

void require_cubic(const AbelEquation& eq) {
    if (eq.q != 3) throw std::invalid_argument("invariant: equation must have q = 3");
}

}  // namespace

bool liouville_defined(double phi3_value, double phi5_value) {
    return std::abs(phi5_value) >= 1e-12 * std::pow(1.0 + std::abs(phi3_value), 5.0 / 3.0);
}

double phi3(const AbelEquation& eq, double t) {
    require_cubic(eq);
    return phi3_from_jets(eq.coeff_jets(t, 1))[0];
}

Jet phi3_jet(const AbelEquation& eq, double t, int m) {
    require_cubic(eq);
    return phi3_from_jets(eq.coeff_jets(t, m + 1));
}

double dphi3(const AbelEquation& eq, double t) {
    require_cubic(eq);
    auto A = eq.coeff_jets(t, 2);
    double via_jet = phi3_from_jets(A)[1];
    double via_expansion = dphi3_expanded(A);
    double scale = std::max({1.0, std::abs(via_jet), std::abs(via_expansion)});
    if (std::abs(via_jet - via_expansion) > kSymbolicRelTol * scale)
        throw std::runtime_error("dphi3: jet path and expanded path disagree");
    return via_jet;
}

double phi5(const AbelEquation& eq, double t) {
    require_cubic(eq);
    return phi5_from_jets(eq.coeff_jets(t, 2))[0];
}

InvariantValue liouville_F(const AbelEquation& eq, double t) {
    InvariantValue v;
    v.t = t;
    v.phi3 = phi3(eq, t);
    v.dphi3 = dphi3(eq, t);
    v.phi5 = phi5(eq, t);
    if (liouville_defined(v.phi3, v.phi5))
        v.F = std::pow(v.phi3, 5) / std::pow(v.phi5, 3);
    return v;
}

Jet liouville_F_jet(const AbelEquation& eq, double t, int m) {
    require_cubic(eq);
    auto A = eq.coeff_jets(t, m + 2);
    Jet p3 = phi3_from_jets(A).truncated(m);
    Jet p5 = phi5_from_jets(A);
    if (p5.value() == 0.0) throw DomainError("phi5 vanishes", "liouville F jet");
    return pow_int(p3, 5) / pow_int(p5, 3);
}

std::vector<std::optional<double>> apply_D(const AbelEquation& eq,
                                           const std::vector<double>& grid) {
    std::vector<std::optional<double>> out(grid.size());
    bool any_undefined = false;
    for (size_t i = 0; i < grid.size(); ++i) {
        InvariantValue v = liouville_F(eq, grid[i]);
        if (!v.F) {
            any_undefined = true;
            break;
        }
        out[i] = liouville_F_jet(eq, grid[i], 1)[1];
    }
    if (any_undefined) return std::vector<std::optional<double>>(grid.size());
    return out;
}

}  // namespace qls

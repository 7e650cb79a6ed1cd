#pragma once

#include <optional>
#include <vector>

#include "qls/abel.hpp"

namespace qls {

// One evaluation of the Liouville data at a fixed t.
// F = phi3^5 / phi5^3 whenever phi5 is nonzero at the working scale.
struct InvariantValue {
    double t = 0.0;
    double phi3 = 0.0;
    double dphi3 = 0.0;
    double phi5 = 0.0;
    std::optional<double> F;
};

// F counts as undefined when |phi5| < 1e-12 (1 + |phi3|)^(5/3); the relative
// scale keeps tiny-coefficient equations from reporting spurious undefineds.
bool liouville_defined(double phi3_value, double phi5_value);

double phi3(const AbelEquation& eq, double t);

// Computed two ways (jet differentiation of phi3 and the expanded first-order
// polynomial in the coefficient jets) and cross-asserted to 1e-9 relative.
double dphi3(const AbelEquation& eq, double t);

double phi5(const AbelEquation& eq, double t);

InvariantValue liouville_F(const AbelEquation& eq, double t);

// phi3 of the equation as a jet of order m (coefficients evaluated at order m+1).
Jet phi3_jet(const AbelEquation& eq, double t, int m);
// F as a jet of order m; requires phi5 != 0 at t.
Jet liouville_F_jet(const AbelEquation& eq, double t, int m);

// d/dt of F along the grid via jets one order deeper. An undefined F anywhere
// on the grid propagates: the whole result is undefined.
std::vector<std::optional<double>> apply_D(const AbelEquation& eq,
                                           const std::vector<double>& grid);

}  // namespace qls

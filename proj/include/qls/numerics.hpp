#pragma once

#include <functional>
#include <vector>

namespace qls {

// Scalar right-hand side f(t, x).
using Rhs = std::function<double(double, double)>;

constexpr double kBlowupThreshold = 1e8;

struct OdeSolution {
    std::vector<double> t;
    std::vector<double> x;
    double residual_estimate = 0.0;  // halved-step comparison
    bool blew_up = false;
    double blowup_time = 0.0;
};

// Classical fixed-step RK4. steps >= 16. Blow-up (|x| > 1e8 or non-finite)
// truncates the solution and records the time.
OdeSolution integrate(const Rhs& rhs, double x0, double t0, double t1, int steps);

// Max over interior grid points of |central-difference xdot - rhs(t, x)|.
// Needs at least 5 samples on a uniform grid.
double residual(const std::vector<double>& t, const std::vector<double>& x, const Rhs& rhs);

// Cumulative integral of f along the grid, composite Simpson on half-steps.
std::vector<double> cumulative_integral(const std::function<double(double)>& f,
                                        const std::vector<double>& grid);

struct Grid {
    double t0 = 0.0;
    double t1 = 1.0;
    int n = 101;  // number of points, >= 2
    std::vector<double> points() const;
};

// Derivative samples of y on a uniform grid, fourth-order finite differences.
std::vector<double> fd_derivative4(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace qls

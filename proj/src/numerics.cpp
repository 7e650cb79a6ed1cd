#include "qls/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace qls {

namespace {

OdeSolution rk4_core(const Rhs& rhs, double x0, double t0, double t1, int steps) {
    OdeSolution sol;
    double h = (t1 - t0) / steps;
    double x = x0;
    sol.t.push_back(t0);
    sol.x.push_back(x0);
    for (int i = 0; i < steps; ++i) {
        double t = t0 + i * h;
        double k1 = rhs(t, x);
        double k2 = rhs(t + h / 2, x + h / 2 * k1);
        double k3 = rhs(t + h / 2, x + h / 2 * k2);
        double k4 = rhs(t + h, x + h * k3);
        x = x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        double tn = t0 + (i + 1) * h;
        if (!std::isfinite(x) || std::abs(x) > kBlowupThreshold) {
            sol.blew_up = true;
            sol.blowup_time = tn;
            return sol;
        }
        sol.t.push_back(tn);
        sol.x.push_back(x);
    }
    return sol;
}

}  // namespace

OdeSolution integrate(const Rhs& rhs, double x0, double t0, double t1, int steps) {
    if (steps < 16) throw std::invalid_argument("integrate: steps must be >= 16");
    if (!(t1 > t0)) throw std::invalid_argument("integrate: empty window");
    OdeSolution coarse = rk4_core(rhs, x0, t0, t1, steps);
    OdeSolution fine = rk4_core(rhs, x0, t0, t1, 2 * steps);
    double est = 0.0;
    size_t n = std::min(coarse.x.size(), (fine.x.size() + 1) / 2);
    for (size_t i = 0; i < n; ++i) est = std::max(est, std::abs(coarse.x[i] - fine.x[2 * i]));
    fine.residual_estimate = est / 15.0;  // RK4 is order 4
    return fine;
}

double residual(const std::vector<double>& t, const std::vector<double>& x, const Rhs& rhs) {
    if (t.size() != x.size() || t.size() < 5) throw std::invalid_argument("residual: need >= 5 samples");
    double worst = 0.0;
    for (size_t i = 1; i + 1 < t.size(); ++i) {
        double h = (t[i + 1] - t[i - 1]) / 2;
        double xdot = (x[i + 1] - x[i - 1]) / (2 * h);
        worst = std::max(worst, std::abs(xdot - rhs(t[i], x[i])));
    }
    return worst;
}

std::vector<double> cumulative_integral(const std::function<double(double)>& f,
                                        const std::vector<double>& grid) {
    std::vector<double> out(grid.size(), 0.0);
    for (size_t i = 1; i < grid.size(); ++i) {
        double a = grid[i - 1], b = grid[i];
        double m = 0.5 * (a + b);
        out[i] = out[i - 1] + (b - a) / 6.0 * (f(a) + 4 * f(m) + f(b));
    }
    return out;
}

std::vector<double> Grid::points() const {
    if (n < 2 || !(t1 > t0)) throw std::invalid_argument("grid: need n >= 2 and t1 > t0");
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) p[i] = t0 + (t1 - t0) * i / (n - 1);
    return p;
}

std::vector<double> fd_derivative4(const std::vector<double>& t, const std::vector<double>& y) {
    size_t n = t.size();
    if (n != y.size() || n < 5) throw std::invalid_argument("fd_derivative4: need >= 5 samples");
    double h = t[1] - t[0];
    std::vector<double> d(n, 0.0);
    auto fwd = [&](size_t i) {
        return (-25 * y[i] + 48 * y[i + 1] - 36 * y[i + 2] + 16 * y[i + 3] - 3 * y[i + 4]) / (12 * h);
    };
    auto bwd = [&](size_t i) {
        return (25 * y[i] - 48 * y[i - 1] + 36 * y[i - 2] - 16 * y[i - 3] + 3 * y[i - 4]) / (12 * h);
    };
    for (size_t i = 0; i < n; ++i) {
        if (i >= 2 && i + 2 < n)
            d[i] = (y[i - 2] - 8 * y[i - 1] + 8 * y[i + 1] - y[i + 2]) / (12 * h);
        else if (i < 2)
            d[i] = fwd(i);
        else
            d[i] = bwd(i);
    }
    return d;
}

}  // namespace qls

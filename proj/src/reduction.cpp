#include "qls/reduction.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "qls/tolerances.hpp"
#include "qls/vf.hpp"

namespace qls {

namespace {

void require_cubic(const AbelEquation& eq) {
    if (eq.q != 3) throw std::invalid_argument("reduction: equation must have q = 3");
}

void require_f3_positive(const AbelEquation& eq, const std::vector<double>& pts) {
    for (double t : pts)
        if (eq.coeffs[3].eval(t) <= 0.0)
            throw ReductionError(ReductionError::Kind::UnsupportedBranch,
                                 "f3 must stay positive on the grid (f3 < 0 branch not handled)");
}

// Residual of beta as a particular solution, relative to the term scale.
double solution_residual(const AbelEquation& eq, const TFunc& beta,
                         const std::vector<double>& pts) {
    double worst = 0.0;
    for (double t : pts) {
        Jet b = beta.eval_jet(t, 1);
        double bdot = b[1], bv = b[0];
        double rhs = eq.rhs(t, bv);
        double scale = 1.0 + std::abs(bdot);
        for (int k = 0; k <= eq.q; ++k)
            scale += std::abs(eq.coeffs[k].eval(t) * std::pow(bv, k));
        worst = std::max(worst, std::abs(bdot - rhs) / scale);
    }
    return worst;
}

std::vector<double> with_midpoints(const std::vector<double>& pts) {
    std::vector<double> out;
    out.reserve(2 * pts.size() - 1);
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        out.push_back(pts[i]);
        out.push_back(0.5 * (pts[i] + pts[i + 1]));
    }
    out.push_back(pts.back());
    return out;
}

// Simpson step using precomputed endpoint/midpoint values.
double simpson_step(double h, double fa, double fm, double fb) {
    return h / 6.0 * (fa + 4 * fm + fb);
}

std::vector<double> real_roots(double a3, double a2, double a1, double a0,
                               bool* degenerate_warning) {
    double scale = std::max({std::abs(a3), std::abs(a2), std::abs(a1), std::abs(a0), 1e-300});
    std::vector<double> coeff = {a0 / scale, a1 / scale, a2 / scale, a3 / scale};
    int deg = 3;
    while (deg > 0 && std::abs(coeff[deg]) < 1e-12) {
        --deg;
        if (degenerate_warning) *degenerate_warning = true;
    }
    std::vector<double> roots;
    if (deg == 0) return roots;
    if (deg == 1) {
        roots.push_back(-coeff[0] / coeff[1]);
        return roots;
    }
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -coeff[i] / coeff[deg];
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp);
    for (int i = 0; i < deg; ++i) {
        auto z = es.eigenvalues()(i);
        if (std::abs(z.imag()) <= 1e-8 * (1.0 + std::abs(z.real()))) roots.push_back(z.real());
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace

CAReport check_CA(const AbelEquation& eq, const Grid& grid, double rtol) {
    require_cubic(eq);
    auto pts = grid.points();
    require_f3_positive(eq, pts);
    CAReport rep;
    rep.rtol = rtol;
    double scale = 0.0;
    for (double t : pts) {
        auto A = eq.coeff_jets(t, 1);
        double f0 = A[0][0], f1 = A[1][0], f2 = A[2][0], f3 = A[3][0];
        double f2dot = A[2][1], f3dot = A[3][1];
        double r = 9 * f3 * (3 * f0 * f3 + f2dot) - 9 * f2 * (f1 * f3 + f3dot) + 2 * f2 * f2 * f2;
        rep.residuals.push_back(r);
        rep.max_abs = std::max(rep.max_abs, std::abs(r));
        scale = std::max({scale, std::abs(27 * f0 * f3 * f3), std::abs(9 * f3 * f2dot),
                          std::abs(9 * f2 * f1 * f3), std::abs(9 * f2 * f3dot),
                          std::abs(2 * f2 * f2 * f2)});
    }
    rep.scale = std::max(scale, 1e-30);
    rep.integrable = rep.max_abs <= rtol * rep.scale;
    return rep;
}

AbelEquation ReductionTarget2D::equation() const {
    TFunc f3 = lambda1;
    TFunc f2 = 3.0 * mu * lambda1;
    TFunc f1 = lambda2;
    TFunc f0 = mu * lambda2 - (2.0 * mu * mu * mu) * lambda1;
    return AbelEquation(3, {f0, f1, f2, f3});
}

void validate_target(const ReductionTarget2D& target, const Grid& grid) {
    for (double t : grid.points())
        if (target.lambda1.eval(t) <= 0.0)
            throw ReductionError(ReductionError::Kind::Degenerate,
                                 "lambda1 must stay positive (same sign as f3) on the grid");
    // Exact closure of the target pair: [Z2, Z1] = 2 Z1 + 6 mu^2 Z2.
    Rational mu = rat_from_double(target.mu);
    auto y = abel_basis(3);
    PolyVF z1 = scaled(y[0], -2 * mu * mu * mu) + scaled(y[2], 3 * mu) + y[3];
    PolyVF z2 = scaled(y[0], mu) + y[1];
    auto coords = in_span(bracket(z2, z1), {z1, z2});
    if (!coords || (*coords)[0] != 2 || (*coords)[1] != 6 * mu * mu)
        throw ReductionError(ReductionError::Kind::Degenerate, "target pair fails bracket closure");
}

namespace {

// Max over grid and coefficients of the relative mismatch between the pushed
// equation and the target span member.
double coefficient_residual(const AbelEquation& pushed, const AbelEquation& target,
                            const std::vector<double>& pts) {
    double worst = 0.0;
    for (int k = 0; k <= 3; ++k) {
        double scale = 1.0;
        for (double t : pts) scale = std::max(scale, 1.0 + std::abs(target.coeffs[k].eval(t)));
        for (double t : pts)
            worst = std::max(
                worst, std::abs(pushed.coeffs[k].eval(t) - target.coeffs[k].eval(t)) / scale);
    }
    return worst;
}

double sign_of(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

// beta admissible for the mu != 0 branch: u = 3 f3 beta + f2 bounded away
// from zero and matching the sign of mu across the grid.
bool admissible_beta(const AbelEquation& eq, const TFunc& beta, double mu,
                     const std::vector<double>& pts) {
    for (double t : pts) {
        double u = 3 * eq.coeffs[3].eval(t) * beta.eval(t) + eq.coeffs[2].eval(t);
        if (std::abs(u) < 1e-8 || sign_of(u) != sign_of(mu)) return false;
    }
    return true;
}

}  // namespace

ReductionCertificate reduce_to_2d(const AbelEquation& eq, double mu,
                                  std::optional<TFunc> beta_choice, const Grid& grid,
                                  double cert_tol) {
    require_cubic(eq);
    auto pts = grid.points();
    CAReport ca = check_CA(eq, grid);
    if (!ca.integrable)
        throw ReductionError(ReductionError::Kind::CAFails,
                             "integrability condition fails (relative residual " +
                                 std::to_string(ca.relative()) + ")",
                             ca.relative());

    const TFunc& f1 = eq.coeffs[1];
    const TFunc& f2 = eq.coeffs[2];
    const TFunc& f3 = eq.coeffs[3];

    ReductionCertificate cert;
    cert.target.mu = mu;

    if (mu == 0.0) {
        TFunc beta = -(f2 / (3.0 * f3));
        double res = solution_residual(eq, beta, pts);
        if (res > 1e-8)
            throw ReductionError(ReductionError::Kind::BranchFails,
                                 "mu = 0 branch needs beta = -f2/(3 f3) to solve the equation "
                                 "(residual " +
                                     std::to_string(res) + ")",
                                 res);
        TFunc lambda1 = TFunc::constant(1.0);
        TFunc alpha = tf_sqrt(lambda1 / f3);
        TFunc lambda2 = 3.0 * (f3 * beta.pow(2)) + 2.0 * (f2 * beta) + f1 -
                        0.5 * (lambda1.derivative() / lambda1 - f3.derivative() / f3);
        cert.curve = {beta, alpha};
        cert.target.lambda1 = lambda1;
        cert.target.lambda2 = lambda2;
    } else {
        std::vector<TFunc> candidates;
        if (beta_choice) {
            candidates.push_back(*beta_choice);
        } else if (mu > 0) {
            candidates = {TFunc::constant(0.0), TFunc::constant(1.0),
                          -(f2 / (3.0 * f3)) + TFunc::constant(1.0)};
        } else {
            candidates = {TFunc::constant(0.0), TFunc::constant(-1.0),
                          -(f2 / (3.0 * f3)) - TFunc::constant(1.0)};
        }
        std::optional<TFunc> beta;
        for (const auto& cand : candidates) {
            if (admissible_beta(eq, cand, mu, pts)) {
                beta = cand;
                break;
            }
        }
        if (!beta)
            throw ReductionError(ReductionError::Kind::NeedsExplicitBeta,
                                 "no automatic beta keeps 3 f3 beta + f2 away from zero with the "
                                 "sign of mu; pass one explicitly");
        TFunc u = 3.0 * (f3 * *beta) + f2;
        TFunc lambda2 = f1 + 2.0 * (f2 * *beta) + 3.0 * (f3 * beta->pow(2)) +
                        (f2 * f3.derivative() - f3 * f2.derivative() -
                         3.0 * (f3.pow(2) * beta->derivative())) /
                            (f3 * u);
        TFunc lambda1 = (u / (3.0 * mu * tf_sqrt(f3))).pow(2);
        TFunc alpha = tf_sqrt(lambda1 / f3);
        cert.curve = {*beta, alpha};
        cert.target.lambda1 = lambda1;
        cert.target.lambda2 = lambda2;
    }

    validate_target(cert.target, grid);
    AbelEquation pushed = pushforward(eq, cert.curve);
    cert.coeff_residual = coefficient_residual(pushed, cert.target.equation(), pts);
    if (cert.coeff_residual > cert_tol)
        throw ReductionError(ReductionError::Kind::BranchFails,
                             "transformed coefficients miss the target span (residual " +
                                 std::to_string(cert.coeff_residual) + ")",
                             cert.coeff_residual);

    // Solve check: among a fixed set of initial values prefer full window
    // coverage, then the smallest trajectory, so the finite-difference
    // residual is not dominated by steep tails.
    bool found = false;
    double best_cover = -1.0, best_size = 0.0;
    for (double x0 : {0.05, -0.05, 0.1, -0.1, 0.2, -0.2}) {
        if (x0 + mu == 0.0) continue;
        BernoulliSolution sol = solve_bernoulli(cert.target, x0, grid);
        if (sol.t.size() < 5) continue;
        double cover = sol.t.size() / static_cast<double>(pts.size());
        double size = 0.0;
        for (double v : sol.xbar) size = std::max(size, std::abs(v));
        if (cover > best_cover + 1e-12 ||
            (std::abs(cover - best_cover) <= 1e-12 && size < best_size)) {
            best_cover = cover;
            best_size = size;
            cert.xbar0 = x0;
            found = true;
        }
    }
    if (!found)
        throw ReductionError(ReductionError::Kind::Degenerate,
                             "all solve-check initial values blow up immediately");
    cert.solve_residual = roundtrip_residual(eq, cert, grid);
    return cert;
}

BernoulliSolution solve_bernoulli(const ReductionTarget2D& target, double xbar0, const Grid& grid) {
    auto pts = grid.points();
    BernoulliSolution sol;
    double mu = target.mu;
    double z0 = xbar0 + mu;
    if (z0 == 0.0) {
        if (mu != 0.0)
            throw std::invalid_argument("solve_bernoulli: z0 = 0 is only a solution branch for mu = 0");
        sol.t = pts;
        sol.xbar.assign(pts.size(), 0.0);
        return sol;
    }

    auto a = [&](double t) {
        return -2.0 * (target.lambda2.eval(t) - 3.0 * mu * mu * target.lambda1.eval(t));
    };
    auto b = [&](double t) { return -2.0 * target.lambda1.eval(t); };

    // A on the doubled grid so the second quadrature has midpoint values.
    auto dpts = with_midpoints(pts);
    auto A = cumulative_integral(a, dpts);

    double w0 = 1.0 / (z0 * z0);
    double sz = sign_of(z0);
    std::vector<double> w(pts.size());
    w[0] = w0;
    double B = 0.0;
    sol.t.push_back(pts[0]);
    sol.xbar.push_back(xbar0);
    for (size_t i = 1; i < pts.size(); ++i) {
        double ta = pts[i - 1], tb = pts[i];
        double tm = dpts[2 * i - 1];
        auto g = [&](double t, double At) { return std::exp(-At) * b(t); };
        B += simpson_step(tb - ta, g(ta, A[2 * i - 2]), g(tm, A[2 * i - 1]), g(tb, A[2 * i]));
        w[i] = std::exp(A[2 * i]) * (w0 + B);
        if (w[i] <= 0.0) {
            // w hits zero in (t_{i-1}, t_i]: finite-time blow-up of z.
            double frac = w[i - 1] / (w[i - 1] - w[i]);
            sol.blew_up = true;
            sol.blowup_time = ta + frac * (tb - ta);
            return sol;
        }
        sol.t.push_back(tb);
        sol.xbar.push_back(sz / std::sqrt(w[i]) - mu);
    }
    return sol;
}

double roundtrip_residual(const AbelEquation& eq, const ReductionCertificate& cert,
                          const Grid& grid) {
    BernoulliSolution sol = solve_bernoulli(cert.target, cert.xbar0, grid);
    if (sol.t.size() < 5)
        throw ReductionError(ReductionError::Kind::Degenerate,
                             "solve check: blow-up leaves fewer than 5 samples");
    std::vector<double> x(sol.t.size());
    for (size_t i = 0; i < sol.t.size(); ++i) {
        GroupElement g = cert.curve.at(sol.t[i]);
        x[i] = g.alpha * sol.xbar[i] + g.beta;
    }
    return residual(sol.t, x, eq);
}

CanonicalForm canonical_form(const AbelEquation& eq, const TFunc& beta, const Grid& grid,
                             double tol) {
    require_cubic(eq);
    auto pts = grid.points();
    require_f3_positive(eq, pts);
    double beta_res = solution_residual(eq, beta, pts);
    if (beta_res > tol)
        throw ReductionError(ReductionError::Kind::NotASolution,
                             "beta is not a particular solution (relative residual " +
                                 std::to_string(beta_res) + ")",
                             beta_res);

    const TFunc& f0 = eq.coeffs[0];
    const TFunc& f1 = eq.coeffs[1];
    const TFunc& f2 = eq.coeffs[2];
    const TFunc& f3 = eq.coeffs[3];
    auto integrand = [&](double t) {
        double bv = beta.eval(t);
        return 3 * f3.eval(t) * bv * bv + 2 * f2.eval(t) * bv + f1.eval(t);
    };

    auto dpts = with_midpoints(pts);
    auto log_alpha = cumulative_integral(integrand, dpts);

    CanonicalForm out;
    out.t = pts;
    out.alpha.resize(pts.size());
    out.tau.resize(pts.size());
    out.f2.resize(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) out.alpha[i] = std::exp(log_alpha[2 * i]);

    auto tau_integrand = [&](double t, double la) { return f3.eval(t) * std::exp(2.0 * la); };
    out.tau[0] = 0.0;
    for (size_t i = 1; i < pts.size(); ++i) {
        double ta = pts[i - 1], tb = pts[i], tm = dpts[2 * i - 1];
        out.tau[i] = out.tau[i - 1] +
                     simpson_step(tb - ta, tau_integrand(ta, log_alpha[2 * i - 2]),
                                  tau_integrand(tm, log_alpha[2 * i - 1]),
                                  tau_integrand(tb, log_alpha[2 * i]));
        if (!(out.tau[i] > out.tau[i - 1]))
            throw ReductionError(ReductionError::Kind::Degenerate,
                                 "tau reparametrisation is not strictly increasing");
    }

    for (size_t i = 0; i < pts.size(); ++i) {
        double t = pts[i];
        double bv = beta.eval(t);
        out.f2[i] = (f2.eval(t) + 3 * f3.eval(t) * bv) / (f3.eval(t) * out.alpha[i]);
    }

    // Transformed f0 vanishes because beta solves the equation; checked from jets.
    for (size_t i = 0; i < pts.size(); ++i) {
        double t = pts[i];
        Jet b = beta.eval_jet(t, 1);
        double num = f3.eval(t) * std::pow(b[0], 3) + f2.eval(t) * b[0] * b[0] +
                     f1.eval(t) * b[0] + f0.eval(t) - b[1];
        out.max_f0_residual = std::max(out.max_f0_residual, std::abs(num / out.alpha[i]));
    }

    // Transformed f1 vanishes when dlog(alpha)/dt matches the quadrature integrand.
    std::vector<double> la(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) la[i] = log_alpha[2 * i];
    auto la_dot = fd_derivative4(pts, la);
    for (size_t i = 0; i < pts.size(); ++i)
        out.max_f1_residual = std::max(out.max_f1_residual, std::abs(la_dot[i] - integrand(pts[i])));
    return out;
}

OneDimReport onedim_candidates(const AbelEquation& eq, const double c[4], const Grid& grid,
                               double tol, double cert_tol) {
    require_cubic(eq);
    if (c[2] == 0.0 || c[3] == 0.0)
        throw std::invalid_argument("onedim_candidates: needs c2 != 0 and c3 != 0");
    auto pts = grid.points();
    const size_t n = pts.size();
    for (double t : pts)
        if (eq.coeffs[3].eval(t) == 0.0)
            throw ReductionError(ReductionError::Kind::UnsupportedBranch, "f3 vanishes on the grid");

    const double K = c[1] * c[3] / (c[2] * c[2]) - 3 * c[0] * c[3] * c[3] / (c[2] * c[2] * c[2]);

    OneDimReport report;
    bool degenerate = false;

    // Roots of the pointwise compatibility cubic in beta.
    std::vector<std::vector<double>> roots(n);
    for (size_t i = 0; i < n; ++i) {
        auto A = eq.coeff_jets(pts[i], 1);
        double f0 = A[0][0], f1 = A[1][0], f2 = A[2][0], f3 = A[3][0];
        double f2dot = A[2][1], f3dot = A[3][1];
        double a3 = 3 * f3 * f3 * f3 * (9 * K - 2);
        double a2 = 3 * f2 * f3 * f3 * (9 * K - 2);
        double a1 = f2 * f2 * f3 * (9 * K - 2);
        double a0 = K * f2 * f2 * f2 - f1 * f2 * f3 + 3 * f0 * f3 * f3 + f3 * f2dot - f2 * f3dot;
        roots[i] = real_roots(a3, a2, a1, a0, &degenerate);
    }
    if (degenerate)
        report.warnings.push_back("compatibility cubic degenerated to lower degree at some grid points");

    // Track root branches by nearest predicted value.
    struct Live {
        int start;
        std::vector<double> vals;
        double slope = 0.0;
    };
    std::vector<Live> live, finished;
    for (double r : roots[0]) live.push_back({0, {r}, 0.0});
    double h = pts.size() > 1 ? pts[1] - pts[0] : 1.0;
    for (size_t i = 1; i < n; ++i) {
        std::vector<bool> root_taken(roots[i].size(), false);
        std::vector<Live> next;
        // Greedy nearest-value matching: pairs (distance, branch, root).
        std::vector<std::tuple<double, size_t, size_t>> pairs;
        for (size_t bi = 0; bi < live.size(); ++bi) {
            double pred = live[bi].vals.back() + live[bi].slope * h;
            for (size_t ri = 0; ri < roots[i].size(); ++ri)
                pairs.emplace_back(std::abs(roots[i][ri] - pred), bi, ri);
        }
        std::sort(pairs.begin(), pairs.end());
        std::vector<bool> branch_done(live.size(), false);
        for (auto& [d, bi, ri] : pairs) {
            if (branch_done[bi] || root_taken[ri]) continue;
            branch_done[bi] = true;
            root_taken[ri] = true;
            Live cont = live[bi];
            cont.slope = (roots[i][ri] - cont.vals.back()) / h;
            cont.vals.push_back(roots[i][ri]);
            next.push_back(std::move(cont));
        }
        for (size_t bi = 0; bi < live.size(); ++bi)
            if (!branch_done[bi]) finished.push_back(std::move(live[bi]));
        for (size_t ri = 0; ri < roots[i].size(); ++ri)
            if (!root_taken[ri]) next.push_back({static_cast<int>(i), {roots[i][ri]}, 0.0});
        live = std::move(next);
    }
    for (auto& b : live) finished.push_back(std::move(b));

    for (const auto& br : finished) {
        if (br.vals.size() < 5) continue;
        OneDimBranch out;
        out.start = br.start;
        out.beta = br.vals;
        const size_t m = br.vals.size();
        std::vector<double> bt(pts.begin() + br.start, pts.begin() + br.start + m);

        // Central-difference beta', one-sided second order at the ends.
        std::vector<double> bdot(m);
        for (size_t i = 0; i < m; ++i) {
            if (i == 0)
                bdot[i] = (-3 * br.vals[0] + 4 * br.vals[1] - br.vals[2]) / (2 * h);
            else if (i + 1 == m)
                bdot[i] = (3 * br.vals[m - 1] - 4 * br.vals[m - 2] + br.vals[m - 3]) / (2 * h);
            else
                bdot[i] = (br.vals[i + 1] - br.vals[i - 1]) / (2 * h);
        }

        double worst = 0.0;
        for (size_t i = 0; i < m; ++i) {
            double t = bt[i], bv = br.vals[i];
            double f0 = eq.coeffs[0].eval(t), f1 = eq.coeffs[1].eval(t);
            double f2 = eq.coeffs[2].eval(t), f3 = eq.coeffs[3].eval(t);
            double u = 3 * f3 * bv + f2;
            double lhs = c[3] * c[3] * c[0] * u * u * u / (c[2] * c[2] * c[2] * f3 * f3);
            double rhs = f3 * bv * bv * bv + f2 * bv * bv + f1 * bv + f0 - bdot[i];
            double scale = 1.0 + std::abs(lhs) + std::abs(f3 * bv * bv * bv) + std::abs(f0) +
                           std::abs(bdot[i]);
            worst = std::max(worst, std::abs(lhs - rhs) / scale);
        }
        out.max_residual = worst;

        if (worst <= tol && br.start == 0 && m == n) {
            out.alpha.resize(m);
            out.xi.resize(m);
            for (size_t i = 0; i < m; ++i) {
                double t = bt[i];
                double f2 = eq.coeffs[2].eval(t), f3 = eq.coeffs[3].eval(t);
                out.alpha[i] = c[3] * (3 * f3 * br.vals[i] + f2) / (c[2] * f3);
                out.xi[i] = f3 * out.alpha[i] * out.alpha[i] / c[3];
            }
            auto adot = fd_derivative4(bt, out.alpha);
            auto bdot4 = fd_derivative4(bt, out.beta);
            double cres = 0.0;
            for (size_t i = 0; i < m; ++i) {
                double t = bt[i], bv = br.vals[i], av = out.alpha[i];
                double f0 = eq.coeffs[0].eval(t), f1 = eq.coeffs[1].eval(t);
                double f2 = eq.coeffs[2].eval(t), f3 = eq.coeffs[3].eval(t);
                double fb3 = f3 * av * av;
                double fb2 = av * (f2 + 3 * f3 * bv);
                double fb1 = 3 * f3 * bv * bv + 2 * f2 * bv + f1 - adot[i] / av;
                double fb0 = (f3 * bv * bv * bv + f2 * bv * bv + f1 * bv + f0 - bdot4[i]) / av;
                double fb[4] = {fb0, fb1, fb2, fb3};
                for (int k = 0; k < 4; ++k) {
                    double want = c[k] * out.xi[i];
                    cres = std::max(cres, std::abs(fb[k] - want) / (1.0 + std::abs(want)));
                }
            }
            out.coeff_residual = cres;
            out.certified = cres <= cert_tol;
        }
        report.branches.push_back(std::move(out));
    }
    std::sort(report.branches.begin(), report.branches.end(),
              [](const OneDimBranch& a, const OneDimBranch& b) {
                  return a.max_residual < b.max_residual;
              });
    return report;
}

}  // namespace qls

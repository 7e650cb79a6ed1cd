#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qls/abel.hpp"
#include "qls/numerics.hpp"

namespace qls {

struct ReductionError : std::runtime_error {
    enum class Kind {
        UnsupportedBranch,   // f3 <= 0 somewhere on the grid
        CAFails,             // integrability condition violated
        NeedsExplicitBeta,   // no automatic beta candidate admissible
        BranchFails,         // mu = 0 with beta not a particular solution
        NotASolution,        // supplied particular solution has nonzero residual
        Degenerate,          // quadrature / monotonicity breakdown
    };
    ReductionError(Kind k, const std::string& msg, double residual_ = 0.0)
        : std::runtime_error(msg), kind(k), residual(residual_) {}
    Kind kind;
    double residual;
};

struct CAReport {
    std::vector<double> residuals;  // per grid point
    double max_abs = 0.0;
    double scale = 1.0;   // largest single term magnitude over the grid
    double rtol = 1e-8;
    bool integrable = false;
    double relative() const { return max_abs / scale; }
};

// Residual of 9 f3 (3 f0 f3 + f2') - 9 f2 (f1 f3 + f3') + 2 f2^3 on the grid.
// Requires f3 > 0 on the grid.
CAReport check_CA(const AbelEquation& eq, const Grid& grid, double rtol = 1e-8);

// Two-dimensional target family: Z1 = -2 mu^3 Y0 + 3 mu Y2 + Y3, Z2 = mu Y0 + Y1,
// with coefficients lambda1 (nonvanishing, same sign as f3) and lambda2.
struct ReductionTarget2D {
    double mu = 0.0;
    TFunc lambda1;
    TFunc lambda2;
    // Coefficient functions of lambda1 Z1 + lambda2 Z2 as a cubic equation.
    AbelEquation equation() const;
};

// Verifies closure of the target pair under bracket (exactly, with mu as a
// dyadic rational) and sign/nonvanishing of lambda1 on the grid.
void validate_target(const ReductionTarget2D& target, const Grid& grid);

struct ReductionCertificate {
    GroupCurve curve;  // (beta, alpha): x = alpha xbar + beta
    ReductionTarget2D target;
    double coeff_residual = 0.0;  // pushforward vs target, relative, max over grid
    double solve_residual = 0.0;  // round-trip solution residual in the original equation
    double xbar0 = 0.0;           // initial value used for the solve check
};

// Builds the reducing change of variables onto the two-dimensional target.
// beta_choice: explicit particular beta (mu != 0 branch) or nullopt for the
// automatic policy beta = 0, then 1, then -f2/(3 f3) + 1 (mirrored for mu < 0).
ReductionCertificate reduce_to_2d(const AbelEquation& eq, double mu,
                                  std::optional<TFunc> beta_choice, const Grid& grid,
                                  double cert_tol = 1e-7);

struct BernoulliSolution {
    std::vector<double> t;
    std::vector<double> xbar;
    bool blew_up = false;
    double blowup_time = 0.0;
};

// Solves dxbar/dt = lambda1 (Z1 part) + lambda2 (Z2 part) through z = xbar + mu,
// w = z^-2, and the linear equation w' = -2 (lambda2 - 3 mu^2 lambda1) w - 2 lambda1
// by integrating factor with Simpson quadrature on the grid.
BernoulliSolution solve_bernoulli(const ReductionTarget2D& target, double xbar0, const Grid& grid);

// Round-trip check: solve the target, pull back through the certificate curve,
// and measure the residual in the original equation.
double roundtrip_residual(const AbelEquation& eq, const ReductionCertificate& cert,
                          const Grid& grid);

struct CanonicalForm {
    std::vector<double> t;
    std::vector<double> alpha;  // exp of the quadrature
    std::vector<double> tau;    // strictly increasing reparametrisation
    std::vector<double> f2;     // coefficient of x^2 in dx/dtau = x^3 + f2(tau) x^2
    double max_f0_residual = 0.0;
    double max_f1_residual = 0.0;
};

// Transformation onto dx/dtau = x^3 + f2(tau) x^2 from a particular solution beta.
CanonicalForm canonical_form(const AbelEquation& eq, const TFunc& beta, const Grid& grid,
                             double tol = 1e-7);

// One-dimensional target <c0 Y0 + c1 Y1 + c2 Y2 + c3 Y3> with c2 c3 != 0.
struct ReductionTarget1D {
    double c[4] = {0, 0, 1, 1};
    std::vector<double> xi;  // samples of the time-scaling coefficient
};

struct OneDimBranch {
    int start = 0;  // grid index range [start, start + beta.size())
    std::vector<double> beta;
    double max_residual = 0.0;  // second compatibility equation, relative
    bool certified = false;
    std::vector<double> alpha;
    std::vector<double> xi;
    double coeff_residual = 0.0;  // pushforward vs c_k xi(t), relative
};

struct OneDimReport {
    std::vector<OneDimBranch> branches;
    std::vector<std::string> warnings;
    bool any_certified() const {
        for (const auto& b : branches)
            if (b.certified) return true;
        return false;
    }
};

// Per grid point the compatibility system reduces to a cubic in beta; real
// roots are tracked across the grid as branches and each full-length branch is
// scored by the residual of the remaining differential condition.
OneDimReport onedim_candidates(const AbelEquation& eq, const double c[4], const Grid& grid,
                               double tol = 1e-4, double cert_tol = 1e-4);

}  // namespace qls

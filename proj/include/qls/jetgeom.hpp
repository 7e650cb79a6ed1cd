#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qls/abel.hpp"
#include "qls/vf.hpp"

namespace qls {

// Coordinates lam_k^(j) on the space of p-th order coefficient jets:
// k indexes the V basis, j the jet level. Flat index = j * dimV + k.
struct JetSpace {
    int dim_v = 4;
    int p = 2;
    int dim() const { return (p + 1) * dim_v; }
    int coord(int level, int k) const { return level * dim_v + k; }
    std::vector<std::string> coord_names() const;
    bool operator==(const JetSpace& o) const { return dim_v == o.dim_v && p == o.p; }
};

using JetPoint = std::vector<double>;

// Vector field on a JetSpace with polynomial (exact rational) coefficients.
struct JetVF {
    JetSpace space;
    std::vector<Poly> comp;  // size space.dim(), each with nvars = space.dim()

    static JetVF zero(const JetSpace& s);
    bool operator==(const JetVF& o) const { return space == o.space && comp == o.comp; }
    bool operator!=(const JetVF& o) const { return !(*this == o); }
    std::string str() const;
};

JetVF operator+(const JetVF& a, const JetVF& b);
JetVF operator-(const JetVF& a, const JetVF& b);
JetVF scaled(const JetVF& a, const Rational& c);
JetVF bracket(const JetVF& a, const JetVF& b);
std::vector<double> eval(const JetVF& f, const JetPoint& pt);

// Lifts of a scheme's structure to jet space. Signs are fixed so that the
// affine scheme on the line reproduces the standard displayed fields.
class SchemeJets {
public:
    explicit SchemeJets(const SchemeSpec& s);

    const SchemeSpec& scheme() const { return scheme_; }
    const std::vector<AdMatrix>& ad() const { return ad_; }
    int dim_v() const { return static_cast<int>(scheme_.v_basis.size()); }
    int dim_w() const { return static_cast<int>(scheme_.w_basis.size()); }

    // Diagonal lift of ad_{W[w]} across all jet levels.
    JetVF lift_J(int w, int p) const;
    // Constant field inserting W[w] at the top jet level.
    JetVF lift_T(int w, int p) const;
    // p = 2 flow generators: theta1 = (L, -ad_L lam^0, -2 ad_L lam^1),
    // theta2 = (0, L, -ad_L lam^0), identity reparametrisation.
    JetVF theta1(int w) const;
    JetVF theta2(int w) const;
    // Order-one flow generator (-L, ad_L lam^0).
    JetVF zflow(int w) const;

    // The eight order-two fields: J lifts, T lifts, theta2's, theta1's.
    std::vector<JetVF> order2_fields() const;
    // Order-one set: J lifts, T lifts, zflows, plus the two adjoined brackets
    // [zflow_0, lift_J 0] ... see order1_bracket_candidates for the variants.
    std::vector<JetVF> order1_fields() const;
    std::vector<JetVF> order1_base_fields() const;
    // All brackets [zflow_i, lift_J j] over W index pairs (i, j).
    std::vector<JetVF> order1_bracket_candidates() const;
    // Order-zero set: J lifts and constant insertions on V itself.
    std::vector<JetVF> order0_fields() const;

private:
    SchemeSpec scheme_;
    std::vector<AdMatrix> ad_;
    std::vector<RatVec> w_coords_;
};

// Per-point numeric rank of the span; singular values below
// 1e-9 * sigma_max are treated as zero.
std::vector<int> distribution_rank(const std::vector<JetVF>& fields,
                                   const std::vector<JetPoint>& points);
// Singular value spectra per point, largest first.
std::vector<std::vector<double>> distribution_spectra(const std::vector<JetVF>& fields,
                                                      const std::vector<JetPoint>& points);

// Candidate invariant in the form num^a / den^b of polynomials on jet space.
struct PowerRatio {
    Poly num;
    long num_pow = 1;
    Poly den;
    long den_pow = 1;
};

// Max over fields and points of the cleared-denominator directional derivative
//   |a den v(num) - b num v(den)| / (1 + |num den|),
// with v(.) computed by forward-mode duals. Points where den vanishes at
// working precision are skipped; if all points degenerate, throws.
double first_integral_check(const PowerRatio& f, const std::vector<JetVF>& fields,
                            const std::vector<JetPoint>& points);

// dim of jet space minus the generic (max over samples) rank.
int invariant_count(const SchemeJets& sj, int p, int samples, std::uint64_t seed);

std::vector<JetPoint> sample_points(int dim, int count, std::uint64_t seed);

// The Liouville data as exact polynomials on the q = 3 jet space (p >= 1 for
// phi3, p >= 2 for the rest).
Poly phi3_poly(const JetSpace& s);
Poly dphi3_poly(const JetSpace& s);
Poly phi5_poly(const JetSpace& s);
PowerRatio liouville_ratio(const JetSpace& s);

// Jet-space point assembled from the coefficient jets of an equation at t.
JetPoint jet_point(const AbelEquation& eq, double t, int p);

}  // namespace qls

#include "qls/jetgeom.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qls {

std::vector<std::string> JetSpace::coord_names() const {
    std::vector<std::string> names;
    for (int j = 0; j <= p; ++j)
        for (int k = 0; k < dim_v; ++k)
            names.push_back("l" + std::to_string(k) + "_" + std::to_string(j));
    return names;
}

JetVF JetVF::zero(const JetSpace& s) {
    JetVF f;
    f.space = s;
    f.comp.assign(s.dim(), Poly(s.dim()));
    return f;
}

std::string JetVF::str() const {
    auto names = space.coord_names();
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < space.dim(); ++i) {
        if (comp[i].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << comp[i].str(names) << ") d/d" << names[i];
    }
    if (first) os << "0";
    return os.str();
}

static void require_same_space(const JetVF& a, const JetVF& b) {
    if (!(a.space == b.space)) throw std::invalid_argument("jet fields on different spaces");
}

JetVF operator+(const JetVF& a, const JetVF& b) {
    require_same_space(a, b);
    JetVF r = a;
    for (int i = 0; i < a.space.dim(); ++i) r.comp[i] += b.comp[i];
    return r;
}

JetVF operator-(const JetVF& a, const JetVF& b) {
    require_same_space(a, b);
    JetVF r = a;
    for (int i = 0; i < a.space.dim(); ++i) r.comp[i] -= b.comp[i];
    return r;
}

JetVF scaled(const JetVF& a, const Rational& c) {
    JetVF r = a;
    for (auto& p : r.comp) p = p.scaled(c);
    return r;
}

JetVF bracket(const JetVF& a, const JetVF& b) {
    require_same_space(a, b);
    JetVF r = JetVF::zero(a.space);
    const int n = a.space.dim();
    for (int i = 0; i < n; ++i) {
        Poly acc(n);
        for (int j = 0; j < n; ++j) {
            if (!a.comp[j].is_zero()) acc += a.comp[j] * b.comp[i].partial(j);
            if (!b.comp[j].is_zero()) acc -= b.comp[j] * a.comp[i].partial(j);
        }
        r.comp[i] = acc;
    }
    return r;
}

std::vector<double> eval(const JetVF& f, const JetPoint& pt) {
    if (static_cast<int>(pt.size()) != f.space.dim())
        throw std::invalid_argument("jet point dimension mismatch");
    std::vector<double> out(f.space.dim());
    for (int i = 0; i < f.space.dim(); ++i) out[i] = f.comp[i].eval(pt);
    return out;
}

SchemeJets::SchemeJets(const SchemeSpec& s) : scheme_(s), ad_(representation(s)) {
    for (const auto& w : s.w_basis) {
        auto c = in_span(w, s.v_basis);
        if (!c) throw std::invalid_argument("scheme W basis not inside V");
        w_coords_.push_back(*c);
    }
}

JetVF SchemeJets::lift_J(int w, int p) const {
    const AdMatrix& m = ad_.at(w);
    JetSpace s{dim_v(), p};
    JetVF f = JetVF::zero(s);
    for (int level = 0; level <= p; ++level)
        for (int i = 0; i < dim_v(); ++i)
            for (int j = 0; j < dim_v(); ++j)
                if (m[i][j] != 0)
                    f.comp[s.coord(level, i)] += Poly::var(s.dim(), s.coord(level, j)).scaled(m[i][j]);
    return f;
}

JetVF SchemeJets::lift_T(int w, int p) const {
    JetSpace s{dim_v(), p};
    JetVF f = JetVF::zero(s);
    const RatVec& c = w_coords_.at(w);
    for (int i = 0; i < dim_v(); ++i)
        if (c[i] != 0) f.comp[s.coord(p, i)] += Poly::constant(s.dim(), c[i]);
    return f;
}

JetVF SchemeJets::theta2(int w) const {
    JetSpace s{dim_v(), 2};
    JetVF f = JetVF::zero(s);
    const RatVec& c = w_coords_.at(w);
    const AdMatrix& m = ad_.at(w);
    for (int i = 0; i < dim_v(); ++i) {
        if (c[i] != 0) f.comp[s.coord(1, i)] += Poly::constant(s.dim(), c[i]);
        for (int j = 0; j < dim_v(); ++j)
            if (m[i][j] != 0)
                f.comp[s.coord(2, i)] -= Poly::var(s.dim(), s.coord(0, j)).scaled(m[i][j]);
    }
    return f;
}

JetVF SchemeJets::theta1(int w) const {
    JetSpace s{dim_v(), 2};
    JetVF f = JetVF::zero(s);
    const RatVec& c = w_coords_.at(w);
    const AdMatrix& m = ad_.at(w);
    for (int i = 0; i < dim_v(); ++i) {
        if (c[i] != 0) f.comp[s.coord(0, i)] += Poly::constant(s.dim(), c[i]);
        for (int j = 0; j < dim_v(); ++j) {
            if (m[i][j] == 0) continue;
            f.comp[s.coord(1, i)] -= Poly::var(s.dim(), s.coord(0, j)).scaled(m[i][j]);
            f.comp[s.coord(2, i)] -= Poly::var(s.dim(), s.coord(1, j)).scaled(2 * m[i][j]);
        }
    }
    return f;
}

JetVF SchemeJets::zflow(int w) const {
    JetSpace s{dim_v(), 1};
    JetVF f = JetVF::zero(s);
    const RatVec& c = w_coords_.at(w);
    const AdMatrix& m = ad_.at(w);
    for (int i = 0; i < dim_v(); ++i) {
        if (c[i] != 0) f.comp[s.coord(0, i)] -= Poly::constant(s.dim(), c[i]);
        for (int j = 0; j < dim_v(); ++j)
            if (m[i][j] != 0)
                f.comp[s.coord(1, i)] += Poly::var(s.dim(), s.coord(0, j)).scaled(m[i][j]);
    }
    return f;
}

std::vector<JetVF> SchemeJets::order2_fields() const {
    std::vector<JetVF> out;
    for (int w = 0; w < dim_w(); ++w) out.push_back(lift_J(w, 2));
    for (int w = 0; w < dim_w(); ++w) out.push_back(lift_T(w, 2));
    for (int w = 0; w < dim_w(); ++w) out.push_back(theta2(w));
    for (int w = 0; w < dim_w(); ++w) out.push_back(theta1(w));
    return out;
}

std::vector<JetVF> SchemeJets::order1_base_fields() const {
    std::vector<JetVF> out;
    for (int w = 0; w < dim_w(); ++w) out.push_back(lift_J(w, 1));
    for (int w = 0; w < dim_w(); ++w) out.push_back(lift_T(w, 1));
    for (int w = 0; w < dim_w(); ++w) out.push_back(zflow(w));
    return out;
}

std::vector<JetVF> SchemeJets::order1_fields() const {
    std::vector<JetVF> out = order1_base_fields();
    out.push_back(bracket(zflow(0), lift_J(0, 1)));
    out.push_back(bracket(zflow(1), lift_J(1, 1)));
    return out;
}

std::vector<JetVF> SchemeJets::order1_bracket_candidates() const {
    std::vector<JetVF> out;
    for (int i = 0; i < dim_w(); ++i)
        for (int j = 0; j < dim_w(); ++j) out.push_back(bracket(zflow(i), lift_J(j, 1)));
    return out;
}

std::vector<JetVF> SchemeJets::order0_fields() const {
    std::vector<JetVF> out;
    for (int w = 0; w < dim_w(); ++w) out.push_back(lift_J(w, 0));
    for (int w = 0; w < dim_w(); ++w) out.push_back(lift_T(w, 0));
    return out;
}

static Eigen::MatrixXd stack_at(const std::vector<JetVF>& fields, const JetPoint& pt) {
    Eigen::MatrixXd m(fields.size(), pt.size());
    for (size_t i = 0; i < fields.size(); ++i) {
        auto v = eval(fields[i], pt);
        for (size_t j = 0; j < v.size(); ++j) m(static_cast<int>(i), static_cast<int>(j)) = v[j];
    }
    return m;
}

std::vector<int> distribution_rank(const std::vector<JetVF>& fields,
                                   const std::vector<JetPoint>& points) {
    if (fields.empty() || points.empty())
        throw std::invalid_argument("distribution_rank: empty input");
    std::vector<int> ranks;
    for (const auto& pt : points) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(stack_at(fields, pt));
        const auto& sv = svd.singularValues();
        double thresh = sv.size() > 0 ? 1e-9 * sv(0) : 0.0;
        int r = 0;
        for (int i = 0; i < sv.size(); ++i)
            if (sv(i) > thresh) ++r;
        ranks.push_back(r);
    }
    return ranks;
}

std::vector<std::vector<double>> distribution_spectra(const std::vector<JetVF>& fields,
                                                      const std::vector<JetPoint>& points) {
    std::vector<std::vector<double>> out;
    for (const auto& pt : points) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(stack_at(fields, pt));
        const auto& sv = svd.singularValues();
        out.emplace_back(sv.data(), sv.data() + sv.size());
    }
    return out;
}

double first_integral_check(const PowerRatio& f, const std::vector<JetVF>& fields,
                            const std::vector<JetPoint>& points) {
    if (fields.empty() || points.empty())
        throw std::invalid_argument("first_integral_check: empty input");
    double worst = 0.0;
    size_t usable = 0;
    for (const auto& pt : points) {
        double den_val = f.den.eval(pt);
        double num_val = f.num.eval(pt);
        if (std::abs(den_val) < 1e-9 * (1.0 + std::abs(num_val))) continue;
        ++usable;
        for (const auto& field : fields) {
            auto dir = eval(field, pt);
            auto [nv, dnum] = f.num.eval_dual(pt, dir);
            auto [dv, dden] = f.den.eval_dual(pt, dir);
            double cleared = static_cast<double>(f.num_pow) * dv * dnum -
                             static_cast<double>(f.den_pow) * nv * dden;
            worst = std::max(worst, std::abs(cleared) / (1.0 + std::abs(nv * dv)));
        }
    }
    if (usable == 0) throw std::runtime_error("first_integral_check: all sample points degenerate");
    return worst;
}

std::vector<JetPoint> sample_points(int dim, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<JetPoint> pts(count, JetPoint(dim));
    for (auto& p : pts)
        for (auto& v : p) v = gauss(rng);
    return pts;
}

int invariant_count(const SchemeJets& sj, int p, int samples, std::uint64_t seed) {
    std::vector<JetVF> fields;
    switch (p) {
        case 0: fields = sj.order0_fields(); break;
        case 1: fields = sj.order1_fields(); break;
        case 2: fields = sj.order2_fields(); break;
        default: throw std::invalid_argument("invariant_count: p must be 0, 1 or 2");
    }
    JetSpace s{sj.dim_v(), p};
    auto ranks = distribution_rank(fields, sample_points(s.dim(), samples, seed));
    int generic = 0;
    for (int r : ranks) generic = std::max(generic, r);
    return s.dim() - generic;
}

Poly phi3_poly(const JetSpace& s) {
    if (s.dim_v != 4 || s.p < 1) throw std::invalid_argument("phi3_poly: need dim V = 4, p >= 1");
    const int n = s.dim();
    auto l = [&](int k, int j) { return Poly::var(n, s.coord(j, k)); };
    return l(3, 1) * l(2, 0) - l(3, 0) * l(2, 1) - (l(0, 0) * l(3, 0) * l(3, 0)).scaled(3) +
           l(1, 0) * l(2, 0) * l(3, 0) - pow(l(2, 0), 3).scaled(rat(2, 9));
}

Poly dphi3_poly(const JetSpace& s) {
    if (s.dim_v != 4 || s.p < 2) throw std::invalid_argument("dphi3_poly: need dim V = 4, p >= 2");
    const int n = s.dim();
    auto l = [&](int k, int j) { return Poly::var(n, s.coord(j, k)); };
    return l(3, 2) * l(2, 0) - l(3, 0) * l(2, 2) - (l(0, 1) * l(3, 0) * l(3, 0)).scaled(3) -
           (l(0, 0) * l(3, 0) * l(3, 1)).scaled(6) + l(1, 1) * l(2, 0) * l(3, 0) +
           l(1, 0) * l(2, 1) * l(3, 0) + l(1, 0) * l(2, 0) * l(3, 1) -
           (l(2, 0) * l(2, 0) * l(2, 1)).scaled(rat(2, 3));
}

Poly phi5_poly(const JetSpace& s) {
    const int n = s.dim();
    auto l = [&](int k, int j) { return Poly::var(n, s.coord(j, k)); };
    Poly p3 = phi3_poly(s);
    Poly dp3 = dphi3_poly(s);
    Poly bracket_term = (-l(3, 1)) + (l(2, 0) * l(2, 0)).scaled(rat(1, 3)) - l(1, 0) * l(3, 0);
    return (-(l(3, 0) * dp3)) - (bracket_term * p3).scaled(3);
}

PowerRatio liouville_ratio(const JetSpace& s) {
    return PowerRatio{phi3_poly(s), 5, phi5_poly(s), 3};
}

JetPoint jet_point(const AbelEquation& eq, double t, int p) {
    JetSpace s{eq.q + 1, p};
    auto jets = eq.coeff_jets(t, p);
    JetPoint pt(s.dim());
    for (int j = 0; j <= p; ++j)
        for (int k = 0; k <= eq.q; ++k) pt[s.coord(j, k)] = jets[k][j];
    return pt;
}

}  // namespace qls

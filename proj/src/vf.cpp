#include "qls/vf.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qls {

PolyVF PolyVF::zero(int dim) {
    PolyVF f;
    f.dim = dim;
    f.comp.assign(dim, Poly(dim));
    return f;
}

PolyVF PolyVF::monomial1d(int deg, const Rational& c) {
    PolyVF f = zero(1);
    f.comp[0] = Poly::monomial(1, {static_cast<unsigned>(deg)}, c);
    return f;
}

bool PolyVF::is_zero() const {
    for (const auto& p : comp)
        if (!p.is_zero()) return false;
    return true;
}

std::optional<int> PolyVF::degree() const {
    int d = -1;
    for (const auto& p : comp) d = std::max(d, p.degree());
    if (d < 0) return std::nullopt;
    return d;
}

std::string PolyVF::str() const {
    static const std::vector<std::string> names = {"x", "y"};
    std::vector<std::string> ns(names.begin(), names.begin() + dim);
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < dim; ++i) {
        if (i) os << ", ";
        os << comp[i].str(ns);
    }
    os << "]";
    return os.str();
}

static void require_same_dim(const PolyVF& a, const PolyVF& b) {
    if (a.dim != b.dim) throw std::invalid_argument("vector field dimension mismatch");
}

PolyVF operator+(const PolyVF& a, const PolyVF& b) {
    require_same_dim(a, b);
    PolyVF r = a;
    for (int i = 0; i < a.dim; ++i) r.comp[i] += b.comp[i];
    return r;
}

PolyVF operator-(const PolyVF& a, const PolyVF& b) {
    require_same_dim(a, b);
    PolyVF r = a;
    for (int i = 0; i < a.dim; ++i) r.comp[i] -= b.comp[i];
    return r;
}

PolyVF scaled(const PolyVF& a, const Rational& c) {
    PolyVF r = a;
    for (auto& p : r.comp) p = p.scaled(c);
    return r;
}

PolyVF linear_combination(const std::vector<PolyVF>& basis, const RatVec& coeffs) {
    if (basis.size() != coeffs.size()) throw std::invalid_argument("linear_combination: size mismatch");
    PolyVF r = PolyVF::zero(basis.at(0).dim);
    for (size_t i = 0; i < basis.size(); ++i) r = r + scaled(basis[i], coeffs[i]);
    return r;
}

PolyVF bracket(const PolyVF& a, const PolyVF& b) {
    require_same_dim(a, b);
    PolyVF r = PolyVF::zero(a.dim);
    for (int i = 0; i < a.dim; ++i) {
        Poly acc(a.dim);
        for (int j = 0; j < a.dim; ++j) {
            acc += a.comp[j] * b.comp[i].partial(j);
            acc -= b.comp[j] * a.comp[i].partial(j);
        }
        r.comp[i] = acc;
    }
    return r;
}

// Map a set of fields onto coefficient vectors over the union of the
// (component, monomial) pairs that occur.
static std::vector<RatVec> coefficient_vectors(const std::vector<const PolyVF*>& fields) {
    int dim = fields.at(0)->dim;
    std::set<std::pair<int, Poly::Expo>> keys;
    for (const PolyVF* f : fields) {
        if (f->dim != dim) throw std::invalid_argument("vector field dimension mismatch");
        for (int i = 0; i < dim; ++i)
            for (const auto& [e, c] : f->comp[i].terms()) keys.insert({i, e});
    }
    std::map<std::pair<int, Poly::Expo>, int> index;
    int n = 0;
    for (const auto& k : keys) index[k] = n++;
    std::vector<RatVec> out;
    for (const PolyVF* f : fields) {
        RatVec v(n, 0);
        for (int i = 0; i < dim; ++i)
            for (const auto& [e, c] : f->comp[i].terms()) v[index.at({i, e})] = c;
        out.push_back(std::move(v));
    }
    return out;
}

std::optional<RatVec> in_span(const PolyVF& f, const std::vector<PolyVF>& basis) {
    if (basis.empty()) return f.is_zero() ? std::optional<RatVec>(RatVec{}) : std::nullopt;
    std::vector<const PolyVF*> all;
    for (const auto& b : basis) all.push_back(&b);
    all.push_back(&f);
    auto vecs = coefficient_vectors(all);
    size_t rows = vecs[0].size();
    RatMat a(rows, RatVec(basis.size(), 0));
    for (size_t j = 0; j < basis.size(); ++j)
        for (size_t i = 0; i < rows; ++i) a[i][j] = vecs[j][i];
    return solve(a, vecs.back());
}

bool span_equal(const std::vector<PolyVF>& a, const std::vector<PolyVF>& b) {
    for (const auto& f : a)
        if (!in_span(f, b)) return false;
    for (const auto& f : b)
        if (!in_span(f, a)) return false;
    return true;
}

std::vector<PolyVF> normalizer(const std::vector<PolyVF>& v_basis, int max_deg) {
    if (v_basis.empty()) throw std::invalid_argument("normalizer: empty basis");
    for (const auto& v : v_basis)
        if (v.dim != 1) throw std::invalid_argument("normalizer: fields must live on the line");
    int max_v_deg = 0;
    for (const auto& v : v_basis) max_v_deg = std::max(max_v_deg, v.degree().value_or(0));
    if (max_deg < max_v_deg) throw std::invalid_argument("normalizer: max_deg below basis degree");

    const int d = max_deg;                    // candidate f = sum c_a x^a, a <= d
    const int r = static_cast<int>(v_basis.size());
    const int rows_per = d + max_v_deg + 1;   // deg of [x^a d/dx, g d/dx] < d + deg g
    const int ncols = (d + 1) + r * r;        // unknowns: c, then span coefficients per basis element

    // Coefficient vectors of the basis polynomials.
    RatMat vmat(rows_per, RatVec(r, 0));
    for (int k = 0; k < r; ++k)
        for (const auto& [e, c] : v_basis[k].comp[0].terms()) vmat[e[0]][k] = c;

    RatMat sys;
    for (int j = 0; j < r; ++j) {
        // [x^a d/dx, g_j d/dx] = (x^a g_j' - a x^(a-1) g_j) d/dx, one column per a.
        for (int m = 0; m < rows_per; ++m) {
            RatVec row(ncols, 0);
            for (int a = 0; a <= d; ++a) {
                Rational val = 0;
                // x^a * g_j' contributes g_j'[m - a]
                int mb = m - a;
                if (mb >= 0 && mb + 1 < rows_per) val += vmat[mb + 1][j] * static_cast<long>(mb + 1);
                // -a x^(a-1) * g_j contributes -a g_j[m - a + 1]
                int mc = m - a + 1;
                if (a >= 1 && mc >= 0 && mc < rows_per) val -= vmat[mc][j] * static_cast<long>(a);
                row[a] = val;
            }
            for (int k = 0; k < r; ++k) row[(d + 1) + j * r + k] = -vmat[m][k];
            sys.push_back(std::move(row));
        }
    }

    std::vector<RatVec> null = nullspace(sys);
    RatMat cpart;
    for (const auto& v : null) cpart.emplace_back(v.begin(), v.begin() + (d + 1));
    rref(cpart);
    std::vector<PolyVF> out;
    for (const auto& row : cpart) {
        PolyVF f = PolyVF::zero(1);
        bool nonzero = false;
        for (int a = 0; a <= d; ++a) {
            if (row[a] == 0) continue;
            f.comp[0].add_term({static_cast<unsigned>(a)}, row[a]);
            nonzero = true;
        }
        if (nonzero) out.push_back(std::move(f));
    }
    return out;
}

SchemeReport check_scheme(const SchemeSpec& s) {
    SchemeReport rep;
    for (size_t i = 0; i < s.w_basis.size(); ++i) {
        if (!in_span(s.w_basis[i], s.v_basis)) {
            rep.w_subset_v = false;
            rep.w_subset_witness = static_cast<int>(i);
            break;
        }
    }
    for (size_t i = 0; i < s.w_basis.size() && rep.ww_closed; ++i)
        for (size_t j = i + 1; j < s.w_basis.size(); ++j) {
            if (!in_span(bracket(s.w_basis[i], s.w_basis[j]), s.w_basis)) {
                rep.ww_closed = false;
                rep.ww_witness = {static_cast<int>(i), static_cast<int>(j)};
                break;
            }
        }
    for (size_t i = 0; i < s.w_basis.size() && rep.wv_stable; ++i)
        for (size_t j = 0; j < s.v_basis.size(); ++j) {
            if (!in_span(bracket(s.w_basis[i], s.v_basis[j]), s.v_basis)) {
                rep.wv_stable = false;
                rep.wv_witness = {static_cast<int>(i), static_cast<int>(j)};
                break;
            }
        }
    return rep;
}

std::vector<AdMatrix> representation(const SchemeSpec& s) {
    SchemeReport rep = check_scheme(s);
    if (!rep.ok()) throw std::runtime_error("representation: scheme axioms fail");
    const int r = static_cast<int>(s.v_basis.size());
    std::vector<AdMatrix> out;
    for (const auto& w : s.w_basis) {
        AdMatrix m(r, RatVec(r, 0));
        for (int j = 0; j < r; ++j) {
            auto coords = in_span(bracket(w, s.v_basis[j]), s.v_basis);
            for (int i = 0; i < r; ++i) m[i][j] = (*coords)[i];
        }
        out.push_back(std::move(m));
    }
    return out;
}

MorphismReport check_morphism(const SchemeSpec& s1, const SchemeSpec& s2, const RatMat& phi) {
    const size_t n1 = s1.v_basis.size(), n2 = s2.v_basis.size();
    if (phi.size() != n2) throw std::invalid_argument("check_morphism: phi row count != dim V2");
    for (const auto& row : phi)
        if (row.size() != n1) throw std::invalid_argument("check_morphism: phi column count != dim V1");

    MorphismReport rep;
    auto image = [&](const RatVec& v1_coords) {
        return linear_combination(s2.v_basis, matvec(phi, v1_coords));
    };
    std::vector<RatVec> w1_coords;
    for (const auto& w : s1.w_basis) {
        auto c = in_span(w, s1.v_basis);
        if (!c) throw std::invalid_argument("check_morphism: W1 not inside V1");
        w1_coords.push_back(*c);
    }

    for (size_t a = 0; a < s1.w_basis.size() && rep.equivariant; ++a) {
        PolyVF phi_w = image(w1_coords[a]);
        for (size_t j = 0; j < n1; ++j) {
            RatVec ej(n1, 0);
            ej[j] = 1;
            PolyVF lhs = bracket(phi_w, image(ej));
            auto br = in_span(bracket(s1.w_basis[a], s1.v_basis[j]), s1.v_basis);
            PolyVF rhs = image(*br);
            if (lhs != rhs) {
                rep.equivariant = false;
                rep.equivariance_witness = {static_cast<int>(a), static_cast<int>(j)};
                break;
            }
        }
    }

    for (size_t a = 0; a < s1.w_basis.size(); ++a) {
        if (!in_span(image(w1_coords[a]), s2.w_basis)) {
            rep.maps_w_into_w = false;
            rep.w_witness = static_cast<int>(a);
            break;
        }
    }

    rep.phi_rank = rank(phi);
    rep.monomorphism = rep.phi_rank == static_cast<int>(n1);
    bool v_onto = rep.phi_rank == static_cast<int>(n2);
    RatMat w_images;
    for (const auto& c : w1_coords) w_images.push_back(matvec(phi, c));
    bool w_onto = rep.maps_w_into_w && rank(w_images) == static_cast<int>(s2.w_basis.size());
    rep.epimorphism = v_onto && w_onto;
    return rep;
}

std::vector<PolyVF> abel_basis(int q) {
    std::vector<PolyVF> out;
    for (int k = 0; k <= q; ++k) out.push_back(PolyVF::monomial1d(k));
    return out;
}

std::vector<PolyVF> affine_basis() { return {PolyVF::monomial1d(0), PolyVF::monomial1d(1)}; }

std::vector<PolyVF> planar_cubic_basis() {
    auto P = [](std::initializer_list<std::pair<Poly::Expo, long>> ts) {
        Poly p(2);
        for (const auto& [e, c] : ts) p.add_term(e, rat(c));
        return p;
    };
    PolyVF z0 = PolyVF::zero(2), z1 = PolyVF::zero(2), z2 = PolyVF::zero(2), z3 = PolyVF::zero(2);
    z0.comp[0] = P({{{0, 0}, 1}});
    z1.comp[0] = P({{{1, 0}, 1}});
    z1.comp[1] = P({{{0, 1}, 1}});
    z2.comp[0] = P({{{2, 0}, 1}, {{0, 2}, -1}});
    z2.comp[1] = P({{{1, 1}, 2}});
    z3.comp[0] = P({{{3, 0}, 1}, {{1, 2}, -3}});
    z3.comp[1] = P({{{2, 1}, 3}});
    return {z0, z1, z2, z3};
}

SchemeSpec abel_scheme(int q) { return {abel_basis(q), affine_basis()}; }

SchemeSpec riccati_scheme() { return {riccati_basis(), riccati_basis()}; }

SchemeSpec planar_cubic_scheme() {
    auto z = planar_cubic_basis();
    return {z, {z[0], z[1]}};
}

}  // namespace qls

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qls/linalg.hpp"
#include "qls/poly.hpp"

namespace qls {

// Polynomial vector field on R (dim 1) or R^2 (dim 2).
struct PolyVF {
    int dim = 1;
    std::vector<Poly> comp;  // one polynomial per coordinate, nvars == dim

    static PolyVF zero(int dim);
    // c * x^deg d/dx on the line.
    static PolyVF monomial1d(int deg, const Rational& c = 1);

    bool is_zero() const;
    std::optional<int> degree() const;  // nullopt for the zero field
    bool operator==(const PolyVF& o) const { return dim == o.dim && comp == o.comp; }
    bool operator!=(const PolyVF& o) const { return !(*this == o); }
    std::string str() const;
};

PolyVF operator+(const PolyVF& a, const PolyVF& b);
PolyVF operator-(const PolyVF& a, const PolyVF& b);
PolyVF scaled(const PolyVF& a, const Rational& c);
PolyVF linear_combination(const std::vector<PolyVF>& basis, const RatVec& coeffs);

// Lie bracket [a,b] = (a.grad)b - (b.grad)a, exact.
PolyVF bracket(const PolyVF& a, const PolyVF& b);

// Exact coordinates of f in span(basis), or nullopt when f is not in the span.
std::optional<RatVec> in_span(const PolyVF& f, const std::vector<PolyVF>& basis);

bool span_equal(const std::vector<PolyVF>& a, const std::vector<PolyVF>& b);

// Largest space of fields f(x) d/dx with deg f <= max_deg and [f d/dx, V] in span(V).
// Fields must live on the line. Closure of the result under brackets is not
// imposed here; run check_scheme on the candidate pair for that.
std::vector<PolyVF> normalizer(const std::vector<PolyVF>& v_basis, int max_deg);

struct SchemeSpec {
    std::vector<PolyVF> v_basis;
    std::vector<PolyVF> w_basis;
};

struct SchemeReport {
    bool w_subset_v = true;
    bool ww_closed = true;
    bool wv_stable = true;
    // First witnesses on failure: indices into the relevant bases.
    std::optional<int> w_subset_witness;
    std::optional<std::pair<int, int>> ww_witness;
    std::optional<std::pair<int, int>> wv_witness;
    bool ok() const { return w_subset_v && ww_closed && wv_stable; }
};

SchemeReport check_scheme(const SchemeSpec& s);

// Matrix of ad_{X1} restricted to V: column j = V-coordinates of [X1, V_basis[j]].
using AdMatrix = RatMat;

// One AdMatrix per W basis element. Throws if check_scheme fails.
std::vector<AdMatrix> representation(const SchemeSpec& s);

struct MorphismReport {
    bool equivariant = true;
    std::optional<std::pair<int, int>> equivariance_witness;  // (w index, v index)
    bool maps_w_into_w = true;
    std::optional<int> w_witness;
    int phi_rank = 0;
    bool monomorphism = false;
    bool epimorphism = false;
    bool is_morphism() const { return equivariant && maps_w_into_w; }
    bool isomorphism() const { return is_morphism() && monomorphism && epimorphism; }
};

// phi maps V1 coordinates to V2 coordinates; shape dim(V2) x dim(V1).
MorphismReport check_morphism(const SchemeSpec& s1, const SchemeSpec& s2, const RatMat& phi);

// Y_k = x^k d/dx, k = 0..q.
std::vector<PolyVF> abel_basis(int q);
inline std::vector<PolyVF> riccati_basis() { return abel_basis(2); }
// W = <d/dx, x d/dx>.
std::vector<PolyVF> affine_basis();
// The planar cubic family: d/dx, x d/dx + y d/dy, (x^2-y^2) d/dx + 2xy d/dy,
// (x^3-3xy^2) d/dx + 3x^2 y d/dy.
std::vector<PolyVF> planar_cubic_basis();

SchemeSpec abel_scheme(int q);
SchemeSpec riccati_scheme();   // W = V = V_Ricc
SchemeSpec planar_cubic_scheme();

}  // namespace qls

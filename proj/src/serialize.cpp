#include "qls/serialize.hpp"

namespace qls {

using nlohmann::json;

namespace {

long to_long_checked(const Rational& q, bool numerator) {
    mpz_class z = numerator ? q.get_num() : q.get_den();
    if (!z.fits_slong_p()) throw SchemaError("coefficient too large for JSON serialization");
    return z.get_si();
}

json terms_to_json(const Poly& p) {
    json terms = json::array();
    for (const auto& [e, c] : p.terms()) {
        json mono = json::array();
        for (unsigned d : e) mono.push_back(d);
        terms.push_back(json::array({mono, to_long_checked(c, true), to_long_checked(c, false)}));
    }
    return terms;
}

Poly terms_from_json(const json& terms, int dim) {
    Poly p(dim);
    if (!terms.is_array()) throw SchemaError("component must be an array of terms");
    for (const auto& term : terms) {
        if (!term.is_array() || term.size() != 3) throw SchemaError("term must be [monomial, num, den]");
        const json& mono = term[0];
        if (!mono.is_array() || static_cast<int>(mono.size()) != dim)
            throw SchemaError("monomial length must equal dim");
        Poly::Expo e;
        for (const auto& d : mono) e.push_back(d.get<unsigned>());
        long num = term[1].get<long>();
        long den = term[2].get<long>();
        if (den == 0) throw SchemaError("zero denominator");
        p.add_term(e, rat(num, den));
    }
    return p;
}

bool looks_like_term(const json& j) {
    return j.is_array() && j.size() == 3 && j[0].is_array() && j[1].is_number() && j[2].is_number();
}

}  // namespace

json to_json(const PolyVF& f) {
    json comps = json::array();
    for (const auto& p : f.comp) comps.push_back(terms_to_json(p));
    return json{{"dim", f.dim}, {"components", comps}};
}

PolyVF polyvf_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("components"))
        throw SchemaError("vector field needs 'dim' and 'components'");
    int dim = j.at("dim").get<int>();
    if (dim != 1 && dim != 2) throw SchemaError("dim must be 1 or 2");
    const json& comps = j.at("components");
    if (!comps.is_array()) throw SchemaError("'components' must be an array");
    PolyVF f = PolyVF::zero(dim);
    // Flat single-component shape for the line.
    if (dim == 1 && !comps.empty() && looks_like_term(comps[0])) {
        f.comp[0] = terms_from_json(comps, 1);
        return f;
    }
    if (static_cast<int>(comps.size()) != dim)
        throw SchemaError("'components' must have one entry per coordinate");
    for (int i = 0; i < dim; ++i) f.comp[i] = terms_from_json(comps[i], dim);
    return f;
}

json to_json(const SchemeSpec& s) {
    json v = json::array(), w = json::array();
    for (const auto& f : s.v_basis) v.push_back(to_json(f));
    for (const auto& f : s.w_basis) w.push_back(to_json(f));
    return json{{"V_basis", v}, {"W_basis", w}};
}

SchemeSpec scheme_from_json(const json& j) {
    if (!j.is_object() || !j.contains("V_basis") || !j.contains("W_basis"))
        throw SchemaError("scheme needs 'V_basis' and 'W_basis'");
    SchemeSpec s;
    for (const auto& f : j.at("V_basis")) s.v_basis.push_back(polyvf_from_json(f));
    for (const auto& f : j.at("W_basis")) s.w_basis.push_back(polyvf_from_json(f));
    if (s.v_basis.empty()) throw SchemaError("empty V basis");
    return s;
}

json to_json(const AbelEquation& eq) {
    json coeffs = json::array();
    for (const auto& c : eq.coeffs) coeffs.push_back(c.str());
    return json{{"q", eq.q}, {"coeffs", coeffs}};
}

AbelEquation abel_from_json(const json& j) {
    if (!j.is_object() || !j.contains("q") || !j.contains("coeffs"))
        throw SchemaError("equation needs 'q' and 'coeffs'");
    int q = j.at("q").get<int>();
    const json& coeffs = j.at("coeffs");
    if (!coeffs.is_array() || static_cast<int>(coeffs.size()) != q + 1)
        throw SchemaError("'coeffs' must list q+1 expressions");
    std::vector<TFunc> fs;
    for (const auto& c : coeffs) fs.push_back(TFunc::parse(c.get<std::string>()));
    return AbelEquation(q, std::move(fs));
}

json to_json(const GroupCurve& g) { return json{{"beta", g.beta.str()}, {"alpha", g.alpha.str()}}; }

GroupCurve curve_from_json(const json& j) {
    if (!j.is_object() || !j.contains("beta") || !j.contains("alpha"))
        throw SchemaError("curve needs 'beta' and 'alpha'");
    return {TFunc::parse(j.at("beta").get<std::string>()),
            TFunc::parse(j.at("alpha").get<std::string>())};
}

}  // namespace qls

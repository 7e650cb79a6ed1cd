#pragma once

#include <json.hpp>
#include <string>

#include "qls/abel.hpp"
#include "qls/vf.hpp"

namespace qls {

struct SchemaError : std::runtime_error {
    explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

// {"dim": n, "components": [[[monomial, num, den], ...] per coordinate]}
// with monomial = [deg_x] or [deg_x, deg_y]. A flat term list is accepted
// for dim = 1 input.
nlohmann::json to_json(const PolyVF& f);
PolyVF polyvf_from_json(const nlohmann::json& j);

// {"V_basis": [...], "W_basis": [...]}
nlohmann::json to_json(const SchemeSpec& s);
SchemeSpec scheme_from_json(const nlohmann::json& j);

// {"q": 3, "coeffs": ["expr", ...]}
nlohmann::json to_json(const AbelEquation& eq);
AbelEquation abel_from_json(const nlohmann::json& j);

// {"beta": "expr", "alpha": "expr"}
nlohmann::json to_json(const GroupCurve& g);
GroupCurve curve_from_json(const nlohmann::json& j);

}  // namespace qls

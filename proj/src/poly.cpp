#include "qls/poly.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qls {

Poly Poly::constant(int nvars, const Rational& c) {
    Poly p(nvars);
    p.add_term(Expo(nvars, 0), c);
    return p;
}

Poly Poly::var(int nvars, int i) {
    Expo e(nvars, 0);
    e.at(i) = 1;
    return monomial(nvars, e, 1);
}

Poly Poly::monomial(int nvars, const Expo& e, const Rational& c) {
    if (static_cast<int>(e.size()) != nvars) throw std::invalid_argument("monomial: exponent size mismatch");
    Poly p(nvars);
    p.add_term(e, c);
    return p;
}

void Poly::add_term(const Expo& e, const Rational& c) {
    if (c == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

int Poly::degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
        int t = 0;
        for (unsigned k : e) t += static_cast<int>(k);
        if (t > d) d = t;
    }
    return d;
}

int Poly::degree_in(int i) const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e[i]));
    return d;
}

Rational Poly::coeff(const Expo& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

Poly& Poly::operator+=(const Poly& o) {
    if (nvars_ != o.nvars_) throw std::invalid_argument("poly: nvars mismatch");
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (nvars_ != o.nvars_) throw std::invalid_argument("poly: nvars mismatch");
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

Poly Poly::operator-() const {
    Poly r(nvars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

Poly Poly::scaled(const Rational& c) const {
    Poly r(nvars_);
    if (c == 0) return r;
    for (const auto& [e, k] : terms_) r.terms_.emplace(e, k * c);
    return r;
}

Poly Poly::partial(int i) const {
    Poly r(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e[i] == 0) continue;
        Expo d = e;
        d[i] -= 1;
        r.add_term(d, c * static_cast<long>(e[i]));
    }
    return r;
}

Poly operator+(Poly a, const Poly& b) {
    a += b;
    return a;
}

Poly operator-(Poly a, const Poly& b) {
    a -= b;
    return a;
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.nvars() != b.nvars()) throw std::invalid_argument("poly: nvars mismatch");
    Poly r(a.nvars());
    for (const auto& [ea, ca] : a.terms()) {
        for (const auto& [eb, cb] : b.terms()) {
            Poly::Expo e(ea);
            for (size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

Poly pow(const Poly& a, unsigned n) {
    Poly r = Poly::constant(a.nvars(), 1);
    for (unsigned k = 0; k < n; ++k) r = r * a;
    return r;
}

double Poly::eval(const std::vector<double>& x) const {
    double s = 0;
    for (const auto& [e, c] : terms_) {
        double m = to_double(c);
        for (size_t i = 0; i < e.size(); ++i)
            for (unsigned k = 0; k < e[i]; ++k) m *= x[i];
        s += m;
    }
    return s;
}

std::pair<double, double> Poly::eval_dual(const std::vector<double>& x,
                                          const std::vector<double>& dir) const {
    double val = 0, der = 0;
    for (const auto& [e, c] : terms_) {
        double cd = to_double(c);
        double m = cd;
        for (size_t i = 0; i < e.size(); ++i)
            for (unsigned k = 0; k < e[i]; ++k) m *= x[i];
        val += m;
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0 || dir[i] == 0.0) continue;
            double part = cd * e[i] * dir[i];
            for (size_t j = 0; j < e.size(); ++j) {
                unsigned p = e[j] - (j == i ? 1u : 0u);
                for (unsigned k = 0; k < p; ++k) part *= x[j];
            }
            der += part;
        }
    }
    return {val, der};
}

std::string Poly::str(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        Rational a = c;
        if (first) {
            if (a < 0) {
                os << "-";
                a = -a;
            }
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        bool any_var = false;
        for (unsigned k : e)
            if (k > 0) any_var = true;
        if (!any_var || a != 1) os << rat_str(a);
        bool need_star = (!any_var || a != 1);
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (need_star) os << "*";
            os << names.at(i);
            if (e[i] > 1) os << "^" << e[i];
            need_star = true;
        }
    }
    return os.str();
}

}  // namespace qls

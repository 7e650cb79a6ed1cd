#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qls/rational.hpp"

namespace qls {

// Sparse multivariate polynomial with exact rational coefficients.
// Zero coefficients are never stored, so equality is syntactic.
class Poly {
public:
    using Expo = std::vector<unsigned>;  // exponent per variable, length nvars

    Poly() = default;
    explicit Poly(int nvars) : nvars_(nvars) {}

    static Poly constant(int nvars, const Rational& c);
    static Poly var(int nvars, int i);
    static Poly monomial(int nvars, const Expo& e, const Rational& c);

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    // Total degree; -1 for the zero polynomial.
    int degree() const;
    int degree_in(int i) const;
    const std::map<Expo, Rational>& terms() const { return terms_; }
    Rational coeff(const Expo& e) const;

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly operator-() const;
    Poly scaled(const Rational& c) const;
    Poly partial(int i) const;

    bool operator==(const Poly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    double eval(const std::vector<double>& x) const;
    // Value and directional derivative along dir at x (forward-mode dual numbers).
    std::pair<double, double> eval_dual(const std::vector<double>& x,
                                        const std::vector<double>& dir) const;

    std::string str(const std::vector<std::string>& names) const;

    void add_term(const Expo& e, const Rational& c);

private:
    int nvars_ = 0;
    std::map<Expo, Rational> terms_;
};

Poly operator+(Poly a, const Poly& b);
Poly operator-(Poly a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly pow(const Poly& a, unsigned n);

}  // namespace qls

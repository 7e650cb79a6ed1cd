#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace qls {

// Value and first K derivatives of a scalar function at a point.
// Entries are derivative values d^k f, not Taylor coefficients.
class Jet {
public:
    explicit Jet(int order, double value = 0.0) : d_(order + 1, 0.0) { d_[0] = value; }

    static Jet constant(int order, double v) { return Jet(order, v); }
    static Jet time_var(int order, double t) {
        Jet j(order, t);
        if (order >= 1) j.d_[1] = 1.0;
        return j;
    }

    int order() const { return static_cast<int>(d_.size()) - 1; }
    double operator[](int k) const { return d_.at(k); }
    double& operator[](int k) { return d_.at(k); }
    double value() const { return d_[0]; }

    // Derivative jet: entries d[1..K], one order lower.
    Jet shifted() const {
        if (order() < 1) throw std::invalid_argument("jet shift requires order >= 1");
        Jet r(order() - 1);
        for (int k = 0; k < order(); ++k) r.d_[k] = d_[k + 1];
        return r;
    }

    Jet truncated(int new_order) const {
        if (new_order > order()) throw std::invalid_argument("jet truncation cannot raise order");
        Jet r(new_order);
        for (int k = 0; k <= new_order; ++k) r.d_[k] = d_[k];
        return r;
    }

private:
    std::vector<double> d_;

    static void require_same(const Jet& a, const Jet& b) {
        if (a.order() != b.order()) throw std::invalid_argument("jet order mismatch");
    }
    static double binom(int n, int k);

    friend Jet operator+(const Jet& a, const Jet& b);
    friend Jet operator-(const Jet& a, const Jet& b);
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);
};

inline double Jet::binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline Jet operator+(const Jet& a, const Jet& b) {
    Jet::require_same(a, b);
    Jet r(a.order());
    for (int k = 0; k <= a.order(); ++k) r[k] = a[k] + b[k];
    return r;
}

inline Jet operator-(const Jet& a, const Jet& b) {
    Jet::require_same(a, b);
    Jet r(a.order());
    for (int k = 0; k <= a.order(); ++k) r[k] = a[k] - b[k];
    return r;
}

inline Jet operator-(const Jet& a) {
    Jet r(a.order());
    for (int k = 0; k <= a.order(); ++k) r[k] = -a[k];
    return r;
}

// Leibniz rule in derivative convention.
inline Jet operator*(const Jet& a, const Jet& b) {
    Jet::require_same(a, b);
    Jet r(a.order());
    for (int k = 0; k <= a.order(); ++k) {
        double s = 0;
        for (int j = 0; j <= k; ++j) s += Jet::binom(k, j) * a[j] * b[k - j];
        r[k] = s;
    }
    return r;
}

inline Jet operator/(const Jet& a, const Jet& b) {
    Jet::require_same(a, b);
    if (b[0] == 0.0) throw std::domain_error("jet division by zero value part");
    Jet h(a.order());
    for (int k = 0; k <= a.order(); ++k) {
        double s = a[k];
        for (int j = 0; j < k; ++j) s -= Jet::binom(k, j) * h[j] * b[k - j];
        h[k] = s / b[0];
    }
    return h;
}

inline Jet operator*(double c, const Jet& a) {
    Jet r(a.order());
    for (int k = 0; k <= a.order(); ++k) r[k] = c * a[k];
    return r;
}
inline Jet operator*(const Jet& a, double c) { return c * a; }
inline Jet operator+(const Jet& a, double c) {
    Jet r = a;
    r[0] += c;
    return r;
}
inline Jet operator-(const Jet& a, double c) { return a + (-c); }

namespace detail {
// Taylor-coefficient views for the composition recurrences.
inline std::vector<double> to_taylor(const Jet& a) {
    std::vector<double> t(a.order() + 1);
    double fact = 1;
    for (int k = 0; k <= a.order(); ++k) {
        if (k > 0) fact *= k;
        t[k] = a[k] / fact;
    }
    return t;
}
inline Jet from_taylor(const std::vector<double>& t) {
    Jet r(static_cast<int>(t.size()) - 1);
    double fact = 1;
    for (size_t k = 0; k < t.size(); ++k) {
        if (k > 0) fact *= k;
        r[static_cast<int>(k)] = t[k] * fact;
    }
    return r;
}
}  // namespace detail

inline void sincos_jet(const Jet& u, Jet& s_out, Jet& c_out) {
    auto a = detail::to_taylor(u);
    int K = u.order();
    std::vector<double> s(K + 1), c(K + 1);
    s[0] = std::sin(a[0]);
    c[0] = std::cos(a[0]);
    for (int k = 1; k <= K; ++k) {
        double ss = 0, cc = 0;
        for (int j = 1; j <= k; ++j) {
            ss += j * a[j] * c[k - j];
            cc += j * a[j] * s[k - j];
        }
        s[k] = ss / k;
        c[k] = -cc / k;
    }
    s_out = detail::from_taylor(s);
    c_out = detail::from_taylor(c);
}

inline Jet sin(const Jet& u) {
    Jet s(u.order()), c(u.order());
    sincos_jet(u, s, c);
    return s;
}

inline Jet cos(const Jet& u) {
    Jet s(u.order()), c(u.order());
    sincos_jet(u, s, c);
    return c;
}

inline Jet exp(const Jet& u) {
    auto a = detail::to_taylor(u);
    int K = u.order();
    std::vector<double> e(K + 1);
    e[0] = std::exp(a[0]);
    for (int k = 1; k <= K; ++k) {
        double s = 0;
        for (int j = 1; j <= k; ++j) s += j * a[j] * e[k - j];
        e[k] = s / k;
    }
    return detail::from_taylor(e);
}

inline Jet log(const Jet& u) {
    if (u[0] <= 0.0) throw std::domain_error("jet log of nonpositive value");
    auto a = detail::to_taylor(u);
    int K = u.order();
    std::vector<double> l(K + 1);
    l[0] = std::log(a[0]);
    for (int k = 1; k <= K; ++k) {
        double s = a[k];
        for (int j = 1; j < k; ++j) s -= (static_cast<double>(j) / k) * l[j] * a[k - j];
        l[k] = s / a[0];
    }
    return detail::from_taylor(l);
}

inline Jet sqrt(const Jet& u) {
    if (u[0] <= 0.0) throw std::domain_error("jet sqrt of nonpositive value");
    auto a = detail::to_taylor(u);
    int K = u.order();
    std::vector<double> s(K + 1);
    s[0] = std::sqrt(a[0]);
    for (int k = 1; k <= K; ++k) {
        double acc = a[k];
        for (int j = 1; j < k; ++j) acc -= s[j] * s[k - j];
        s[k] = acc / (2 * s[0]);
    }
    return detail::from_taylor(s);
}

inline Jet pow_int(const Jet& u, long n) {
    if (n == 0) return Jet::constant(u.order(), 1.0);
    bool neg = n < 0;
    unsigned long m = neg ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
    Jet r = Jet::constant(u.order(), 1.0);
    Jet base = u;
    while (m > 0) {
        if (m & 1ul) r = r * base;
        base = base * base;
        m >>= 1ul;
    }
    if (neg) return Jet::constant(u.order(), 1.0) / r;
    return r;
}

}  // namespace qls

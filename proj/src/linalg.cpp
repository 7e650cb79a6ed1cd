#include "qls/linalg.hpp"

#include <stdexcept>

namespace qls {

RatMat rat_identity(int n) {
    RatMat a(n, RatVec(n, 0));
    for (int i = 0; i < n; ++i) a[i][i] = 1;
    return a;
}

RatMat rat_zero(int rows, int cols) { return RatMat(rows, RatVec(cols, 0)); }

RatMat matmul(const RatMat& a, const RatMat& b) {
    if (a.empty() || b.empty()) return {};
    size_t n = a.size(), m = b[0].size(), k = b.size();
    if (a[0].size() != k) throw std::invalid_argument("matmul: shape mismatch");
    RatMat c(n, RatVec(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
        }
    return c;
}

RatVec matvec(const RatMat& a, const RatVec& x) {
    RatVec y(a.size(), 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != x.size()) throw std::invalid_argument("matvec: shape mismatch");
        for (size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
    }
    return y;
}

RatMat matpow(RatMat a, unsigned n) {
    RatMat r = rat_identity(static_cast<int>(a.size()));
    while (n > 0) {
        if (n & 1u) r = matmul(r, a);
        a = matmul(a, a);
        n >>= 1u;
    }
    return r;
}

bool is_zero(const RatMat& a) {
    for (const auto& row : a)
        for (const auto& v : row)
            if (v != 0) return false;
    return true;
}

std::vector<int> rref(RatMat& a) {
    std::vector<int> pivots;
    if (a.empty()) return pivots;
    size_t rows = a.size(), cols = a[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && a[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[r]);
        Rational inv = 1 / a[r][c];
        for (size_t j = c; j < cols; ++j) a[r][j] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rational f = a[i][c];
            for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        pivots.push_back(static_cast<int>(c));
        ++r;
    }
    return pivots;
}

int rank(RatMat a) { return static_cast<int>(rref(a).size()); }

std::optional<RatVec> solve(const RatMat& a, const RatVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("solve: shape mismatch");
    if (a.empty()) return RatVec{};
    size_t rows = a.size(), cols = a[0].size();
    RatMat aug(rows, RatVec(cols + 1, 0));
    for (size_t i = 0; i < rows; ++i) {
        for (size_t j = 0; j < cols; ++j) aug[i][j] = a[i][j];
        aug[i][cols] = b[i];
    }
    std::vector<int> piv = rref(aug);
    for (int p : piv)
        if (p == static_cast<int>(cols)) return std::nullopt;  // row (0 ... 0 | 1)
    RatVec x(cols, 0);
    for (size_t k = 0; k < piv.size(); ++k) x[piv[k]] = aug[k][cols];
    return x;
}

std::vector<RatVec> nullspace(const RatMat& a) {
    if (a.empty()) return {};
    size_t cols = a[0].size();
    RatMat m = a;
    std::vector<int> piv = rref(m);
    std::vector<bool> is_piv(cols, false);
    for (int p : piv) is_piv[p] = true;
    std::vector<RatVec> basis;
    for (size_t free = 0; free < cols; ++free) {
        if (is_piv[free]) continue;
        RatVec v(cols, 0);
        v[free] = 1;
        for (size_t k = 0; k < piv.size(); ++k) v[piv[k]] = -m[k][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<int> nilpotency_index(const RatMat& a) {
    int n = static_cast<int>(a.size());
    RatMat p = rat_identity(n);
    for (int m = 1; m <= n; ++m) {
        p = matmul(p, a);
        if (is_zero(p)) return m;
    }
    return std::nullopt;
}

}  // namespace qls

#pragma once

#include <optional>
#include <vector>

#include "qls/rational.hpp"

namespace qls {

using RatVec = std::vector<Rational>;
using RatMat = std::vector<RatVec>;  // row-major

RatMat rat_identity(int n);
RatMat rat_zero(int rows, int cols);
RatMat matmul(const RatMat& a, const RatMat& b);
RatVec matvec(const RatMat& a, const RatVec& x);
RatMat matpow(RatMat a, unsigned n);
bool is_zero(const RatMat& a);

// Gauss-Jordan to reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(RatMat& a);

int rank(RatMat a);

// Exact solve of a x = b. Inconsistent system -> nullopt.
// Underdetermined systems get free variables set to zero.
std::optional<RatVec> solve(const RatMat& a, const RatVec& b);

// Basis of { x : a x = 0 }.
std::vector<RatVec> nullspace(const RatMat& a);

// Smallest m >= 1 with a^m = 0, or nullopt if a is not nilpotent.
std::optional<int> nilpotency_index(const RatMat& a);

}  // namespace qls

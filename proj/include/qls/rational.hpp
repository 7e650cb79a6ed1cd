#pragma once

#include <gmpxx.h>

#include <string>

namespace qls {

// Exact rational scalar used by all symbolic-side computations.
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Exact conversion: every double is a dyadic rational.
inline Rational rat_from_double(double x) { return Rational(x); }

inline double to_double(const Rational& q) { return q.get_d(); }

inline std::string rat_str(const Rational& q) { return q.get_str(); }

}  // namespace qls

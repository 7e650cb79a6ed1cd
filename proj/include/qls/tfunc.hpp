#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "qls/jet.hpp"

namespace qls {

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
    size_t position;
};

struct DomainError : std::runtime_error {
    DomainError(const std::string& msg, std::string subexpr_)
        : std::runtime_error(msg + " in '" + subexpr_ + "'"), subexpr(std::move(subexpr_)) {}
    std::string subexpr;
};

namespace ast {
struct Node;
using NodePtr = std::shared_ptr<const Node>;
}  // namespace ast

// A t-dependent scalar coefficient: an immutable expression tree over
//   number | t | - | + - * / | ^int | sin cos exp sqrt log
// plus an internal derivative node D(.) that never comes from user input.
// Evaluation at any t yields a jet of any requested order.
class TFunc {
public:
    TFunc();  // the zero function

    static TFunc parse(const std::string& src);
    static TFunc constant(double v);
    static TFunc constant(long num, long den);
    static TFunc time();

    std::string str() const;
    Jet eval_jet(double t, int K) const;
    double eval(double t) const { return eval_jet(t, 0)[0]; }

    // d/dt as an expression node; evaluation asks the child for one extra order.
    TFunc derivative() const;
    TFunc pow(long n) const;
    bool is_constant(double v) const;

    friend TFunc operator+(const TFunc& a, const TFunc& b);
    friend TFunc operator-(const TFunc& a, const TFunc& b);
    friend TFunc operator*(const TFunc& a, const TFunc& b);
    friend TFunc operator/(const TFunc& a, const TFunc& b);
    friend TFunc operator-(const TFunc& a);
    friend TFunc tf_sin(const TFunc& a);
    friend TFunc tf_cos(const TFunc& a);
    friend TFunc tf_exp(const TFunc& a);
    friend TFunc tf_sqrt(const TFunc& a);
    friend TFunc tf_log(const TFunc& a);

private:
    explicit TFunc(ast::NodePtr n) : root_(std::move(n)) {}
    ast::NodePtr root_;
};

inline TFunc operator+(const TFunc& a, double b) { return a + TFunc::constant(b); }
inline TFunc operator*(double a, const TFunc& b) { return TFunc::constant(a) * b; }
inline TFunc operator*(const TFunc& a, double b) { return a * TFunc::constant(b); }
inline TFunc operator-(double a, const TFunc& b) { return TFunc::constant(a) - b; }
inline TFunc operator/(const TFunc& a, double b) { return a / TFunc::constant(b); }

}  // namespace qls

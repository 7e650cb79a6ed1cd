#include "qls/tfunc.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace qls {
namespace ast {

enum class Kind { Number, Time, Neg, Add, Sub, Mul, Div, Pow, Call, Deriv };
enum class Fn { Sin, Cos, Exp, Sqrt, Log };

struct Node {
    Kind kind;
    double value = 0;  // Number
    long ipow = 0;     // Pow exponent
    Fn fn = Fn::Sin;   // Call target
    NodePtr a, b;
};

namespace {

std::shared_ptr<Node> make(Kind k) { return std::make_shared<Node>(Node{k}); }

NodePtr num(double v) {
    auto n = make(Kind::Number);
    n->value = v;
    return n;
}

bool is_num(const NodePtr& n, double v) { return n->kind == Kind::Number && n->value == v; }
bool is_num(const NodePtr& n) { return n->kind == Kind::Number; }

NodePtr time_node() { return make(Kind::Time); }

NodePtr neg(const NodePtr& a) {
    if (is_num(a)) return num(-a->value);
    if (a->kind == Kind::Neg) return a->a;
    auto n = make(Kind::Neg);
    n->a = a;
    return n;
}

NodePtr add(const NodePtr& a, const NodePtr& b) {
    if (is_num(a) && is_num(b)) return num(a->value + b->value);
    if (is_num(a, 0)) return b;
    if (is_num(b, 0)) return a;
    auto n = make(Kind::Add);
    n->a = a;
    n->b = b;
    return n;
}

NodePtr sub(const NodePtr& a, const NodePtr& b) {
    if (is_num(a) && is_num(b)) return num(a->value - b->value);
    if (is_num(b, 0)) return a;
    if (is_num(a, 0)) return neg(b);
    auto n = make(Kind::Sub);
    n->a = a;
    n->b = b;
    return n;
}

NodePtr mul(const NodePtr& a, const NodePtr& b) {
    if (is_num(a) && is_num(b)) return num(a->value * b->value);
    if (is_num(a, 0) || is_num(b, 0)) return num(0);
    if (is_num(a, 1)) return b;
    if (is_num(b, 1)) return a;
    auto n = make(Kind::Mul);
    n->a = a;
    n->b = b;
    return n;
}

NodePtr div(const NodePtr& a, const NodePtr& b) {
    if (is_num(a) && is_num(b) && b->value != 0) return num(a->value / b->value);
    if (is_num(a, 0) && is_num(b) && b->value != 0) return num(0);
    if (is_num(b, 1)) return a;
    auto n = make(Kind::Div);
    n->a = a;
    n->b = b;
    return n;
}

NodePtr powi(const NodePtr& a, long e) {
    if (e == 1) return a;
    if (e == 0) return num(1);
    if (is_num(a)) return num(std::pow(a->value, static_cast<double>(e)));
    auto n = make(Kind::Pow);
    n->a = a;
    n->ipow = e;
    return n;
}

NodePtr call(Fn f, const NodePtr& a) {
    auto n = make(Kind::Call);
    n->fn = f;
    n->a = a;
    return n;
}

NodePtr deriv(const NodePtr& a) {
    if (is_num(a)) return num(0);
    if (a->kind == Kind::Time) return num(1);
    auto n = make(Kind::Deriv);
    n->a = a;
    return n;
}

std::string fn_name(Fn f) {
    switch (f) {
        case Fn::Sin: return "sin";
        case Fn::Cos: return "cos";
        case Fn::Exp: return "exp";
        case Fn::Sqrt: return "sqrt";
        case Fn::Log: return "log";
    }
    return "?";
}

std::string num_str(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

int precedence(const Node& n) {
    switch (n.kind) {
        case Kind::Add:
        case Kind::Sub: return 1;
        case Kind::Mul:
        case Kind::Div: return 2;
        case Kind::Neg: return 3;
        case Kind::Pow: return 4;
        default: return 5;
    }
}

void print(const NodePtr& n, std::ostringstream& os);

void print_wrapped(const NodePtr& n, std::ostringstream& os, bool wrap) {
    if (wrap) os << "(";
    print(n, os);
    if (wrap) os << ")";
}

void print(const NodePtr& n, std::ostringstream& os) {
    const int p = precedence(*n);
    switch (n->kind) {
        case Kind::Number: os << num_str(n->value); break;
        case Kind::Time: os << "t"; break;
        case Kind::Neg:
            // grammar: "-" applies to a base, so any compound child needs parens
            os << "-";
            print_wrapped(n->a, os, precedence(*n->a) < 5);
            break;
        case Kind::Add:
        case Kind::Sub:
        case Kind::Mul:
        case Kind::Div: {
            print_wrapped(n->a, os, precedence(*n->a) < p);
            os << (n->kind == Kind::Add ? "+" : n->kind == Kind::Sub ? "-" : n->kind == Kind::Mul ? "*" : "/");
            bool strict = n->kind == Kind::Sub || n->kind == Kind::Div;
            print_wrapped(n->b, os, precedence(*n->b) < p + (strict ? 1 : 0));
            break;
        }
        case Kind::Pow: {
            bool atom = precedence(*n->a) == 5 && !(is_num(n->a) && n->a->value < 0);
            print_wrapped(n->a, os, !atom);
            os << "^";
            if (n->ipow < 0)
                os << "(" << n->ipow << ")";
            else
                os << n->ipow;
            break;
        }
        case Kind::Call:
            os << fn_name(n->fn) << "(";
            print(n->a, os);
            os << ")";
            break;
        case Kind::Deriv:
            os << "D(";
            print(n->a, os);
            os << ")";
            break;
    }
}

std::string to_string(const NodePtr& n) {
    std::ostringstream os;
    print(n, os);
    return os.str();
}

Jet eval(const NodePtr& n, double t, int K) {
    switch (n->kind) {
        case Kind::Number: return Jet::constant(K, n->value);
        case Kind::Time: return Jet::time_var(K, t);
        case Kind::Neg: return -eval(n->a, t, K);
        case Kind::Add: return eval(n->a, t, K) + eval(n->b, t, K);
        case Kind::Sub: return eval(n->a, t, K) - eval(n->b, t, K);
        case Kind::Mul: return eval(n->a, t, K) * eval(n->b, t, K);
        case Kind::Div: {
            Jet den = eval(n->b, t, K);
            if (den.value() == 0.0) throw DomainError("division by zero", to_string(n));
            return eval(n->a, t, K) / den;
        }
        case Kind::Pow: {
            Jet base = eval(n->a, t, K);
            if (n->ipow < 0 && base.value() == 0.0)
                throw DomainError("zero base with negative exponent", to_string(n));
            return pow_int(base, n->ipow);
        }
        case Kind::Call: {
            Jet u = eval(n->a, t, K);
            switch (n->fn) {
                case Fn::Sin: return sin(u);
                case Fn::Cos: return cos(u);
                case Fn::Exp: return exp(u);
                case Fn::Sqrt:
                    if (u.value() <= 0.0) throw DomainError("sqrt of nonpositive value", to_string(n));
                    return sqrt(u);
                case Fn::Log:
                    if (u.value() <= 0.0) throw DomainError("log of nonpositive value", to_string(n));
                    return log(u);
            }
            throw std::logic_error("unreachable");
        }
        case Kind::Deriv: return eval(n->a, t, K + 1).shifted();
    }
    throw std::logic_error("unreachable");
}

class Parser {
public:
    explicit Parser(const std::string& src) : s_(src) {}

    NodePtr run() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != s_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    const std::string& s_;
    size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
    }

    NodePtr expr() {
        NodePtr e = term();
        for (;;) {
            if (accept('+'))
                e = add(e, term());
            else if (accept('-'))
                e = sub(e, term());
            else
                return e;
        }
    }

    NodePtr term() {
        NodePtr e = factor();
        for (;;) {
            if (accept('*'))
                e = mul(e, factor());
            else if (accept('/'))
                e = div(e, factor());
            else
                return e;
        }
    }

    NodePtr factor() {
        NodePtr b = base();
        if (accept('^')) return powi(b, exponent());
        return b;
    }

    long exponent() {
        skip_ws();
        bool parens = accept('(');
        skip_ws();
        bool negative = accept('-');
        skip_ws();
        size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) throw ParseError("exponent must be an integer", pos_);
        long v = std::stol(s_.substr(start, pos_ - start));
        if (parens) {
            if (peek() != ')')
                throw ParseError("exponent must be an integer (non-integer exponent)", pos_);
            expect(')');
        } else if (pos_ < s_.size() && s_[pos_] == '.') {
            throw ParseError("exponent must be an integer (non-integer exponent)", pos_);
        }
        return negative ? -v : v;
    }

    NodePtr base() {
        char c = peek();
        if (c == '(') {
            expect('(');
            NodePtr e = expr();
            expect(')');
            return e;
        }
        if (c == '-') {
            expect('-');
            return neg(base());
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        throw ParseError("expected number, 't', function call or '('", pos_);
    }

    NodePtr number() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            size_t mark = pos_;
            ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            } else {
                pos_ = mark;  // 'e' belonged to something else
            }
        }
        return num(std::stod(s_.substr(start, pos_ - start)));
    }

    NodePtr identifier() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        std::string name = s_.substr(start, pos_ - start);
        if (name == "t") return time_node();
        Fn f;
        if (name == "sin")
            f = Fn::Sin;
        else if (name == "cos")
            f = Fn::Cos;
        else if (name == "exp")
            f = Fn::Exp;
        else if (name == "sqrt")
            f = Fn::Sqrt;
        else if (name == "log")
            f = Fn::Log;
        else
            throw ParseError("unknown identifier '" + name + "'", start);
        expect('(');
        NodePtr arg = expr();
        expect(')');
        return call(f, arg);
    }
};

}  // namespace
}  // namespace ast

TFunc::TFunc() : root_(ast::num(0)) {}

TFunc TFunc::parse(const std::string& src) { return TFunc(ast::Parser(src).run()); }

TFunc TFunc::constant(double v) { return TFunc(ast::num(v)); }

TFunc TFunc::constant(long n, long d) {
    if (d == 1) return TFunc(ast::num(static_cast<double>(n)));
    return TFunc(ast::div(ast::num(static_cast<double>(n)), ast::num(static_cast<double>(d))));
}

TFunc TFunc::time() { return TFunc(ast::time_node()); }

std::string TFunc::str() const { return ast::to_string(root_); }

Jet TFunc::eval_jet(double t, int K) const { return ast::eval(root_, t, K); }

TFunc TFunc::derivative() const { return TFunc(ast::deriv(root_)); }

TFunc TFunc::pow(long n) const { return TFunc(ast::powi(root_, n)); }

bool TFunc::is_constant(double v) const { return ast::is_num(root_, v); }

TFunc operator+(const TFunc& a, const TFunc& b) { return TFunc(ast::add(a.root_, b.root_)); }
TFunc operator-(const TFunc& a, const TFunc& b) { return TFunc(ast::sub(a.root_, b.root_)); }
TFunc operator*(const TFunc& a, const TFunc& b) { return TFunc(ast::mul(a.root_, b.root_)); }
TFunc operator/(const TFunc& a, const TFunc& b) { return TFunc(ast::div(a.root_, b.root_)); }
TFunc operator-(const TFunc& a) { return TFunc(ast::neg(a.root_)); }
TFunc tf_sin(const TFunc& a) { return TFunc(ast::call(ast::Fn::Sin, a.root_)); }
TFunc tf_cos(const TFunc& a) { return TFunc(ast::call(ast::Fn::Cos, a.root_)); }
TFunc tf_exp(const TFunc& a) { return TFunc(ast::call(ast::Fn::Exp, a.root_)); }
TFunc tf_sqrt(const TFunc& a) { return TFunc(ast::call(ast::Fn::Sqrt, a.root_)); }
TFunc tf_log(const TFunc& a) { return TFunc(ast::call(ast::Fn::Log, a.root_)); }

}  // namespace qls

#pragma once

// Small arithmetic language for user-supplied nonlinearities f(k, x, u).
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          (right associative)
//   primary := number | 'k' | 'x' | 'u' | func '(' args ')' | '(' expr ')'
//   func    := sin | cos | exp | abs (one argument) | powq (two arguments)

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace plap::expr {

class SyntaxError : public std::invalid_argument {
public:
    SyntaxError(const std::string& what, std::size_t position)
        : std::invalid_argument(what + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

class UnknownIdentifierError : public SyntaxError {
public:
    UnknownIdentifierError(const std::string& name, std::size_t position)
        : SyntaxError("unknown identifier '" + name + "'", position), name_(name) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

/// Division by zero, 0 raised to a negative power, or a complex-valued power.
class EvaluationError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

enum class Op { Number, VarK, VarX, VarU, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Abs, Powq };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    Op op = Op::Number;
    double value = 0.0;
    std::vector<NodePtr> args;
};

inline bool structurally_equal(const Node& a, const Node& b) {
    if (a.op != b.op || a.args.size() != b.args.size()) return false;
    if (a.op == Op::Number && a.value != b.value) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!structurally_equal(*a.args[i], *b.args[i])) return false;
    return true;
}

struct Point {
    double k = 0.0;
    double x = 0.0;
    double u = 0.0;
};

inline double evaluate(const Node& n, const Point& p) {
    auto arg = [&](std::size_t i) { return evaluate(*n.args[i], p); };
    switch (n.op) {
        case Op::Number: return n.value;
        case Op::VarK: return p.k;
        case Op::VarX: return p.x;
        case Op::VarU: return p.u;
        case Op::Neg: return -arg(0);
        case Op::Add: return arg(0) + arg(1);
        case Op::Sub: return arg(0) - arg(1);
        case Op::Mul: return arg(0) * arg(1);
        case Op::Div: {
            const double num = arg(0);
            const double den = arg(1);
            if (den == 0.0) throw EvaluationError("division by zero");
            return num / den;
        }
        case Op::Pow: {
            const double base = arg(0);
            const double expo = arg(1);
            if (base == 0.0 && expo < 0.0) throw EvaluationError("0 raised to a negative power");
            if (base < 0.0 && expo != std::trunc(expo))
                throw EvaluationError("negative base raised to a non-integer power");
            return std::pow(base, expo);
        }
        case Op::Sin: return std::sin(arg(0));
        case Op::Cos: return std::cos(arg(0));
        case Op::Exp: return std::exp(arg(0));
        case Op::Abs: return std::abs(arg(0));
        case Op::Powq: {
            const double t = arg(0);
            const double q = arg(1);
            if (t == 0.0) {
                if (q < 0.0) throw EvaluationError("powq(0, q) with negative q");
                return 0.0;
            }
            return std::copysign(std::pow(std::abs(t), q), t);
        }
    }
    throw EvaluationError("corrupt expression node");
}

namespace detail {

inline NodePtr make(Op op, std::vector<NodePtr> args = {}, double value = 0.0) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->value = value;
    n->args = std::move(args);
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    NodePtr parse() {
        skip_ws();
        if (pos_ >= s_.size()) throw SyntaxError("empty expression", pos_);
        NodePtr e = expr();
        skip_ws();
        if (pos_ < s_.size()) throw SyntaxError(std::string("unexpected '") + s_[pos_] + "'", pos_);
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= s_.size()) throw SyntaxError(std::string("expected '") + c + "' but input ended", pos_);
            throw SyntaxError(std::string("expected '") + c + "'", pos_);
        }
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) lhs = make(Op::Add, {lhs, term()});
            else if (accept('-')) lhs = make(Op::Sub, {lhs, term()});
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) lhs = make(Op::Mul, {lhs, unary()});
            else if (accept('/')) lhs = make(Op::Div, {lhs, unary()});
            else return lhs;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Op::Neg, {unary()});
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(Op::Pow, {base, unary()});
        return base;
    }

    NodePtr primary() {
        skip_ws();
        if (pos_ >= s_.size()) throw SyntaxError("unexpected end of input", pos_);
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        if (accept('(')) {
            NodePtr e = expr();
            expect(')');
            return e;
        }
        throw SyntaxError(std::string("unexpected '") + c + "'", pos_);
    }

    NodePtr number() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t q = pos_ + 1;
            if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
            if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
                pos_ = q;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            }
        }
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
        if (ec != std::errc() || ptr != s_.data() + pos_) throw SyntaxError("malformed number", start);
        return make(Op::Number, {}, v);
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        const std::string name(s_.substr(start, pos_ - start));
        if (name == "k") return make(Op::VarK);
        if (name == "x") return make(Op::VarX);
        if (name == "u") return make(Op::VarU);

        Op op;
        std::size_t arity = 1;
        if (name == "sin") op = Op::Sin;
        else if (name == "cos") op = Op::Cos;
        else if (name == "exp") op = Op::Exp;
        else if (name == "abs") op = Op::Abs;
        else if (name == "powq") {
            op = Op::Powq;
            arity = 2;
        } else {
            throw UnknownIdentifierError(name, start);
        }
        expect('(');
        std::vector<NodePtr> args{expr()};
        while (accept(',')) args.push_back(expr());
        expect(')');
        if (args.size() != arity)
            throw SyntaxError(name + " takes " + std::to_string(arity) + " argument(s), got " +
                                  std::to_string(args.size()),
                              start);
        return make(op, std::move(args));
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

inline std::string format_number(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), ptr);
}

}  // namespace detail

inline NodePtr parse_expression(std::string_view text) { return detail::Parser(text).parse(); }

/// Fully parenthesised rendering; parse(print(t)) is structurally identical to t.
inline std::string print(const Node& n) {
    auto a = [&](std::size_t i) { return print(*n.args[i]); };
    auto bin = [&](const char* op) { return "(" + a(0) + " " + op + " " + a(1) + ")"; };
    switch (n.op) {
        case Op::Number: {
            // The parser never yields negative literals; this branch only keeps hand-built trees printable.
            if (std::signbit(n.value)) return "(-" + detail::format_number(-n.value) + ")";
            return detail::format_number(n.value);
        }
        case Op::VarK: return "k";
        case Op::VarX: return "x";
        case Op::VarU: return "u";
        case Op::Neg: return "(-" + a(0) + ")";
        case Op::Add: return bin("+");
        case Op::Sub: return bin("-");
        case Op::Mul: return bin("*");
        case Op::Div: return bin("/");
        case Op::Pow: return bin("^");
        case Op::Sin: return "sin(" + a(0) + ")";
        case Op::Cos: return "cos(" + a(0) + ")";
        case Op::Exp: return "exp(" + a(0) + ")";
        case Op::Abs: return "abs(" + a(0) + ")";
        case Op::Powq: return "powq(" + a(0) + ", " + a(1) + ")";
    }
    return "?";
}

/// Parsed expression with value semantics.
class Expression {
public:
    explicit Expression(std::string_view text) : source_(text), root_(parse_expression(text)) {}

    double operator()(double k, double x, double u) const { return evaluate(*root_, Point{k, x, u}); }
    const std::string& source() const { return source_; }
    const Node& tree() const { return *root_; }
    std::string printed() const { return print(*root_); }

private:
    std::string source_;
    NodePtr root_;
};

}  // namespace plap::expr

#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace riccert {

class ExprError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by parse(); offset is the byte position of the offending token.
class ParseError : public ExprError {
public:
    ParseError(const std::string& what, std::size_t offset)
        : ExprError(what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Raised by evaluation when the argument leaves the domain of a node
/// (division by zero, log of a non-positive value, sqrt of a negative,
/// zero to a negative power, non-integer power of a negative base).
class DomainError : public ExprError {
public:
    DomainError(const std::string& node, double t)
        : ExprError("domain error in '" + node + "' at t=" + std::to_string(t)),
          node_(node), t_(t) {}
    const std::string& node() const noexcept { return node_; }
    double t() const noexcept { return t_; }

private:
    std::string node_;
    double t_;
};

class NonDifferentiableError : public ExprError {
public:
    explicit NonDifferentiableError(const std::string& node)
        : ExprError("non-differentiable node '" + node + "'"), node_(node) {}
    const std::string& node() const noexcept { return node_; }

private:
    std::string node_;
};

namespace detail {
struct Node;
}

/// Immutable scalar function of t as an expression tree. Node set:
/// constants, t, {neg, exp, log, sin, cos, sqrt, abs}, {+, -, *, /, ^}.
/// Values share subtrees; safe to copy and to use across threads.
class Expr {
public:
    Expr();  // the constant 0

    static Expr constant(double value);
    static Expr var();  // the independent variable t

    static Expr neg(Expr e);
    static Expr exp(Expr e);
    static Expr log(Expr e);
    static Expr sin(Expr e);
    static Expr cos(Expr e);
    static Expr sqrt(Expr e);
    static Expr abs(Expr e);
    static Expr pow(Expr base, Expr exponent);

    double operator()(double t) const { return evaluate(t); }
    double evaluate(double t) const;

    /// Symbolic d/dt. Constant folding only, no further simplification.
    Expr derivative() const;

    std::string str() const;

    /// Structural equality (same shape, bit-equal constants).
    bool same_as(const Expr& other) const;

    bool is_constant() const;
    double constant_value() const;  // precondition: is_constant()

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);

private:
    explicit Expr(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const detail::Node> node_;
    friend struct detail::Node;
    friend class Parser;
};

inline Expr operator+(const Expr& a, double b) { return a + Expr::constant(b); }
inline Expr operator+(double a, const Expr& b) { return Expr::constant(a) + b; }
inline Expr operator-(const Expr& a, double b) { return a - Expr::constant(b); }
inline Expr operator-(double a, const Expr& b) { return Expr::constant(a) - b; }
inline Expr operator*(const Expr& a, double b) { return a * Expr::constant(b); }
inline Expr operator*(double a, const Expr& b) { return Expr::constant(a) * b; }
inline Expr operator/(const Expr& a, double b) { return a / Expr::constant(b); }
inline Expr operator/(double a, const Expr& b) { return Expr::constant(a) / b; }

/// Parse a formula over t. Grammar (EBNF in docs/grammar.ebnf):
/// precedence ^  >  unary -  >  * /  >  + -, with ^ right-associative.
Expr parse(std::string_view text);

}  // namespace riccert

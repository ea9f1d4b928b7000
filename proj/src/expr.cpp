#include "riccert/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace riccert {
namespace detail {

enum class Kind {
    constant,
    variable,
    neg,
    exp_,
    log_,
    sin_,
    cos_,
    sqrt_,
    abs_,
    add,
    sub,
    mul,
    div,
    pow_,
};

const char* kind_name(Kind k) {
    switch (k) {
        case Kind::constant: return "constant";
        case Kind::variable: return "t";
        case Kind::neg: return "neg";
        case Kind::exp_: return "exp";
        case Kind::log_: return "log";
        case Kind::sin_: return "sin";
        case Kind::cos_: return "cos";
        case Kind::sqrt_: return "sqrt";
        case Kind::abs_: return "abs";
        case Kind::add: return "add";
        case Kind::sub: return "sub";
        case Kind::mul: return "mul";
        case Kind::div: return "div";
        case Kind::pow_: return "pow";
    }
    return "?";
}

struct Node {
    Kind kind;
    double value = 0.0;  // constants only
    std::shared_ptr<const Node> lhs, rhs;
    // A pow node whose exponent was a literal integer is valid for any base.
    bool int_exponent = false;

    static std::shared_ptr<const Node> make(Kind k, std::shared_ptr<const Node> l = nullptr,
                                            std::shared_ptr<const Node> r = nullptr) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->lhs = std::move(l);
        n->rhs = std::move(r);
        return n;
    }
};

using NodePtr = std::shared_ptr<const Node>;

NodePtr make_const(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::constant;
    n->value = v;
    return n;
}

bool is_const(const NodePtr& n) { return n->kind == Kind::constant; }
bool is_const(const NodePtr& n, double v) { return is_const(n) && n->value == v; }

bool is_integer_value(double v) {
    return std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15;
}

double eval_node(const Node& n, double t);

double eval_pow(const Node& n, double t) {
    double base = eval_node(*n.lhs, t);
    double expo = eval_node(*n.rhs, t);
    if (n.int_exponent || (is_const(n.rhs) && is_integer_value(n.rhs->value))) {
        if (base == 0.0 && expo < 0.0) throw DomainError("pow (0^negative)", t);
        return std::pow(base, expo);
    }
    if (base < 0.0) throw DomainError("pow (negative base, non-integer exponent)", t);
    if (base == 0.0 && expo <= 0.0) throw DomainError("pow (0^nonpositive)", t);
    return std::pow(base, expo);
}

double eval_node(const Node& n, double t) {
    switch (n.kind) {
        case Kind::constant: return n.value;
        case Kind::variable: return t;
        case Kind::neg: return -eval_node(*n.lhs, t);
        case Kind::exp_: return std::exp(eval_node(*n.lhs, t));
        case Kind::log_: {
            double x = eval_node(*n.lhs, t);
            if (x <= 0.0) throw DomainError("log", t);
            return std::log(x);
        }
        case Kind::sin_: return std::sin(eval_node(*n.lhs, t));
        case Kind::cos_: return std::cos(eval_node(*n.lhs, t));
        case Kind::sqrt_: {
            double x = eval_node(*n.lhs, t);
            if (x < 0.0) throw DomainError("sqrt", t);
            return std::sqrt(x);
        }
        case Kind::abs_: return std::fabs(eval_node(*n.lhs, t));
        case Kind::add: return eval_node(*n.lhs, t) + eval_node(*n.rhs, t);
        case Kind::sub: return eval_node(*n.lhs, t) - eval_node(*n.rhs, t);
        case Kind::mul: return eval_node(*n.lhs, t) * eval_node(*n.rhs, t);
        case Kind::div: {
            double den = eval_node(*n.rhs, t);
            if (den == 0.0) throw DomainError("div", t);
            return eval_node(*n.lhs, t) / den;
        }
        case Kind::pow_: return eval_pow(n, t);
    }
    throw ExprError("corrupt expression node");
}

// --- smart constructors with constant folding -------------------------------

NodePtr fold_unary(Kind k, NodePtr child) {
    if (is_const(child)) {
        const Node tmp{k, 0.0, child, nullptr, false};
        // folding only when the constant is inside the domain and the folded
        // value stays finite (printable and re-parseable)
        try {
            double v = eval_node(tmp, 0.0);
            if (std::isfinite(v)) return make_const(v);
        } catch (const DomainError&) {
            // keep the node; evaluation will raise the error with the real t
        }
    }
    return Node::make(k, std::move(child));
}

NodePtr fold_binary(Kind k, double v, NodePtr a, NodePtr b) {
    if (std::isfinite(v)) return make_const(v);
    return Node::make(k, std::move(a), std::move(b));
}

NodePtr make_add(NodePtr a, NodePtr b) {
    if (is_const(a) && is_const(b)) {
        double v = a->value + b->value;
        return fold_binary(Kind::add, v, std::move(a), std::move(b));
    }
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    return Node::make(Kind::add, std::move(a), std::move(b));
}

NodePtr make_sub(NodePtr a, NodePtr b) {
    if (is_const(a) && is_const(b)) {
        double v = a->value - b->value;
        return fold_binary(Kind::sub, v, std::move(a), std::move(b));
    }
    if (is_const(b, 0.0)) return a;
    if (is_const(a, 0.0)) return fold_unary(Kind::neg, std::move(b));
    return Node::make(Kind::sub, std::move(a), std::move(b));
}

NodePtr make_mul(NodePtr a, NodePtr b) {
    if (is_const(a) && is_const(b)) {
        double v = a->value * b->value;
        return fold_binary(Kind::mul, v, std::move(a), std::move(b));
    }
    if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    return Node::make(Kind::mul, std::move(a), std::move(b));
}

NodePtr make_div(NodePtr a, NodePtr b) {
    if (is_const(b) && b->value != 0.0) {
        if (is_const(a)) {
            double v = a->value / b->value;
            return fold_binary(Kind::div, v, std::move(a), std::move(b));
        }
        if (b->value == 1.0) return a;
    }
    if (is_const(a, 0.0) && !is_const(b, 0.0)) return make_const(0.0);
    return Node::make(Kind::div, std::move(a), std::move(b));
}

NodePtr make_pow(NodePtr base, NodePtr expo) {
    bool int_exp = is_const(expo) && is_integer_value(expo->value);
    if (is_const(expo, 1.0)) return base;
    if (is_const(expo, 0.0)) return make_const(1.0);
    if (is_const(base) && is_const(expo)) {
        Node tmp{Kind::pow_, 0.0, base, expo, int_exp};
        try {
            double v = eval_node(tmp, 0.0);
            if (std::isfinite(v)) return make_const(v);
        } catch (const DomainError&) {
        }
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::pow_;
    n->lhs = std::move(base);
    n->rhs = std::move(expo);
    n->int_exponent = int_exp;
    return n;
}

// --- differentiation --------------------------------------------------------

NodePtr diff(const NodePtr& n);

NodePtr diff(const NodePtr& n) {
    switch (n->kind) {
        case Kind::constant: return make_const(0.0);
        case Kind::variable: return make_const(1.0);
        case Kind::neg: return fold_unary(Kind::neg, diff(n->lhs));
        case Kind::exp_:
            return make_mul(fold_unary(Kind::exp_, n->lhs), diff(n->lhs));
        case Kind::log_:
            return make_div(diff(n->lhs), n->lhs);
        case Kind::sin_:
            return make_mul(fold_unary(Kind::cos_, n->lhs), diff(n->lhs));
        case Kind::cos_:
            return fold_unary(Kind::neg, make_mul(fold_unary(Kind::sin_, n->lhs), diff(n->lhs)));
        case Kind::sqrt_:
            return make_div(diff(n->lhs),
                            make_mul(make_const(2.0), fold_unary(Kind::sqrt_, n->lhs)));
        case Kind::abs_:
            throw NonDifferentiableError("abs");
        case Kind::add: return make_add(diff(n->lhs), diff(n->rhs));
        case Kind::sub: return make_sub(diff(n->lhs), diff(n->rhs));
        case Kind::mul:
            return make_add(make_mul(diff(n->lhs), n->rhs), make_mul(n->lhs, diff(n->rhs)));
        case Kind::div:
            // (u/v)' = u'/v - u v'/v^2
            return make_sub(make_div(diff(n->lhs), n->rhs),
                            make_div(make_mul(n->lhs, diff(n->rhs)),
                                     make_pow(n->rhs, make_const(2.0))));
        case Kind::pow_: {
            if (is_const(n->rhs)) {
                // c * u^(c-1) * u'
                double c = n->rhs->value;
                return make_mul(make_mul(make_const(c), make_pow(n->lhs, make_const(c - 1.0))),
                                diff(n->lhs));
            }
            // u^v * (v' log u + v u'/u)
            auto term1 = make_mul(diff(n->rhs), fold_unary(Kind::log_, n->lhs));
            auto term2 = make_div(make_mul(n->rhs, diff(n->lhs)), n->lhs);
            return make_mul(make_pow(n->lhs, n->rhs), make_add(term1, term2));
        }
    }
    throw ExprError("corrupt expression node");
}

// --- printing ---------------------------------------------------------------

// precedence: add/sub 1, mul/div 2, neg 3, pow 4, atoms 5
int precedence(const Node& n) {
    switch (n.kind) {
        case Kind::add:
        case Kind::sub: return 1;
        case Kind::mul:
        case Kind::div: return 2;
        case Kind::neg: return 3;
        case Kind::pow_: return 4;
        case Kind::constant: return n.value < 0.0 ? 3 : 5;
        default: return 5;
    }
}

std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), p);
}

void print_node(const Node& n, std::string& out);

void print_child(const Node& child, int parent_prec, bool needs_parens_at_equal,
                 std::string& out) {
    int p = precedence(child);
    bool parens = p < parent_prec || (p == parent_prec && needs_parens_at_equal);
    if (parens) out += '(';
    print_node(child, out);
    if (parens) out += ')';
}

void print_node(const Node& n, std::string& out) {
    switch (n.kind) {
        case Kind::constant: out += format_double(n.value); return;
        case Kind::variable: out += 't'; return;
        case Kind::neg:
            out += '-';
            print_child(*n.lhs, 3, false, out);
            return;
        case Kind::exp_:
        case Kind::log_:
        case Kind::sin_:
        case Kind::cos_:
        case Kind::sqrt_:
        case Kind::abs_:
            out += kind_name(n.kind);
            out += '(';
            print_node(*n.lhs, out);
            out += ')';
            return;
        case Kind::add:
            print_child(*n.lhs, 1, false, out);
            out += " + ";
            print_child(*n.rhs, 1, true, out);
            return;
        case Kind::sub:
            print_child(*n.lhs, 1, false, out);
            out += " - ";
            print_child(*n.rhs, 1, true, out);
            return;
        case Kind::mul:
            print_child(*n.lhs, 2, false, out);
            out += '*';
            print_child(*n.rhs, 2, true, out);
            return;
        case Kind::div:
            print_child(*n.lhs, 2, false, out);
            out += '/';
            print_child(*n.rhs, 2, true, out);
            return;
        case Kind::pow_:
            print_child(*n.lhs, 4, true, out);  // pow is right-associative
            out += '^';
            print_child(*n.rhs, 4, false, out);
            return;
    }
}

bool same_node(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == Kind::constant) {
        // bit-equality; treats -0.0 == 0.0 distinct from NaN handling, which
        // never reaches printed form
        return a.value == b.value || (std::isnan(a.value) && std::isnan(b.value));
    }
    if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs)) return false;
    if (static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs)) return false;
    if (a.lhs && !same_node(*a.lhs, *b.lhs)) return false;
    if (a.rhs && !same_node(*a.rhs, *b.rhs)) return false;
    return true;
}

}  // namespace detail

using detail::NodePtr;

Expr::Expr() : node_(detail::make_const(0.0)) {}

Expr Expr::constant(double value) { return Expr(detail::make_const(value)); }
Expr Expr::var() { return Expr(detail::Node::make(detail::Kind::variable)); }

Expr Expr::neg(Expr e) { return Expr(detail::fold_unary(detail::Kind::neg, e.node_)); }
Expr Expr::exp(Expr e) { return Expr(detail::fold_unary(detail::Kind::exp_, e.node_)); }
Expr Expr::log(Expr e) { return Expr(detail::fold_unary(detail::Kind::log_, e.node_)); }
Expr Expr::sin(Expr e) { return Expr(detail::fold_unary(detail::Kind::sin_, e.node_)); }
Expr Expr::cos(Expr e) { return Expr(detail::fold_unary(detail::Kind::cos_, e.node_)); }
Expr Expr::sqrt(Expr e) { return Expr(detail::fold_unary(detail::Kind::sqrt_, e.node_)); }
Expr Expr::abs(Expr e) { return Expr(detail::fold_unary(detail::Kind::abs_, e.node_)); }
Expr Expr::pow(Expr base, Expr exponent) {
    return Expr(detail::make_pow(base.node_, exponent.node_));
}

double Expr::evaluate(double t) const { return detail::eval_node(*node_, t); }

Expr Expr::derivative() const { return Expr(detail::diff(node_)); }

std::string Expr::str() const {
    std::string out;
    detail::print_node(*node_, out);
    return out;
}

bool Expr::same_as(const Expr& other) const { return detail::same_node(*node_, *other.node_); }

bool Expr::is_constant() const { return node_->kind == detail::Kind::constant; }
double Expr::constant_value() const { return node_->value; }

Expr operator+(const Expr& a, const Expr& b) { return Expr(detail::make_add(a.node_, b.node_)); }
Expr operator-(const Expr& a, const Expr& b) { return Expr(detail::make_sub(a.node_, b.node_)); }
Expr operator*(const Expr& a, const Expr& b) { return Expr(detail::make_mul(a.node_, b.node_)); }
Expr operator/(const Expr& a, const Expr& b) { return Expr(detail::make_div(a.node_, b.node_)); }
Expr operator-(const Expr& a) { return Expr::neg(a); }

// --- parser -----------------------------------------------------------------

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr run() {
        auto e = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return Expr(std::move(e));
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool accept(char c) {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!accept(c)) fail(std::string("expected '") + c + "' " + what);
    }

    NodePtr parse_sum() {
        auto lhs = parse_product();
        for (;;) {
            if (accept('+'))
                lhs = detail::make_add(std::move(lhs), parse_product());
            else if (accept('-'))
                lhs = detail::make_sub(std::move(lhs), parse_product());
            else
                return lhs;
        }
    }

    NodePtr parse_product() {
        auto lhs = parse_unary();
        for (;;) {
            if (accept('*'))
                lhs = detail::make_mul(std::move(lhs), parse_unary());
            else if (accept('/'))
                lhs = detail::make_div(std::move(lhs), parse_unary());
            else
                return lhs;
        }
    }

    NodePtr parse_unary() {
        if (accept('-')) return detail::fold_unary(detail::Kind::neg, parse_unary());
        return parse_power();
    }

    NodePtr parse_power() {
        auto base = parse_atom();
        if (accept('^')) return detail::make_pow(std::move(base), parse_unary());
        return base;
    }

    NodePtr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        if (accept('(')) {
            auto inner = parse_sum();
            expect(')', "to close parenthesis");
            return inner;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr parse_number() {
        const char* begin = text_.data() + pos_;
        char* end = nullptr;
        // strtod accepts leading sign, but parse_unary has already consumed it
        double v = std::strtod(begin, &end);
        if (end == begin) fail("malformed number");
        pos_ += static_cast<std::size_t>(end - begin);
        return detail::make_const(v);
    }

    NodePtr parse_identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name(text_.substr(start, pos_ - start));
        if (name == "t") return detail::Node::make(detail::Kind::variable);

        detail::Kind k;
        if (name == "exp") k = detail::Kind::exp_;
        else if (name == "log") k = detail::Kind::log_;
        else if (name == "sin") k = detail::Kind::sin_;
        else if (name == "cos") k = detail::Kind::cos_;
        else if (name == "sqrt") k = detail::Kind::sqrt_;
        else if (name == "abs") k = detail::Kind::abs_;
        else {
            pos_ = start;
            fail("unknown identifier '" + name + "'");
        }
        expect('(', "after function name");
        auto arg = parse_sum();
        expect(')', "to close function call");
        return detail::fold_unary(k, std::move(arg));
    }
};

Expr parse(std::string_view text) { return Parser(text).run(); }

}  // namespace riccert

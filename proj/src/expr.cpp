#include "phiconvex/expr.hpp"

#include <charconv>
#include <cmath>
#include <cctype>
#include <system_error>

#include "phiconvex/error.hpp"

namespace phiconvex {

struct Expr::Node {
    Op op;
    double value = 0.0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

int arity(Op op) noexcept {
    switch (op) {
    case Op::Constant:
    case Op::Variable:
        return 0;
    case Op::Neg:
    case Op::Exp:
    case Op::Log:
    case Op::Abs:
    case Op::Sqrt:
        return 1;
    default:
        return 2;
    }
}

Expr Expr::constant(double value) {
    return Expr(std::make_shared<const Node>(Node{Op::Constant, value, nullptr, nullptr}));
}

Expr Expr::variable() {
    return Expr(std::make_shared<const Node>(Node{Op::Variable, 0.0, nullptr, nullptr}));
}

Expr Expr::unary(Op op, Expr child) {
    if (arity(op) != 1) throw Error("operator is not unary");
    return Expr(std::make_shared<const Node>(Node{op, 0.0, std::move(child.node_), nullptr}));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
    if (arity(op) != 2) throw Error("operator is not binary");
    return Expr(std::make_shared<const Node>(
        Node{op, 0.0, std::move(lhs.node_), std::move(rhs.node_)}));
}

Op Expr::op() const noexcept { return node_->op; }
double Expr::value() const noexcept { return node_->value; }

Expr Expr::child(int i) const {
    const auto& c = i == 0 ? node_->lhs : node_->rhs;
    if (!c) throw Error("expression node has no such child");
    return Expr(c);
}

namespace {

using NodePtr = const Expr::Node*;

std::string format_number(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

const char* function_name(Op op) {
    switch (op) {
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Abs: return "abs";
    case Op::Sqrt: return "sqrt";
    case Op::Min: return "min";
    case Op::Max: return "max";
    default: return nullptr;
    }
}

char infix_symbol(Op op) {
    switch (op) {
    case Op::Add: return '+';
    case Op::Sub: return '-';
    case Op::Mul: return '*';
    case Op::Div: return '/';
    case Op::Pow: return '^';
    default: return '\0';
    }
}

void render_node(const Expr::Node& n, std::string& out) {
    switch (n.op) {
    case Op::Constant:
        if (std::signbit(n.value)) {
            out += "(-";
            out += format_number(-n.value);
            out += ')';
        } else {
            out += format_number(n.value);
        }
        return;
    case Op::Variable:
        out += 'x';
        return;
    case Op::Neg:
        out += "(-(";
        render_node(*n.lhs, out);
        out += "))";
        return;
    case Op::Exp:
    case Op::Log:
    case Op::Abs:
    case Op::Sqrt:
        out += function_name(n.op);
        out += '(';
        render_node(*n.lhs, out);
        out += ')';
        return;
    case Op::Min:
    case Op::Max:
        out += function_name(n.op);
        out += '(';
        render_node(*n.lhs, out);
        out += ',';
        render_node(*n.rhs, out);
        out += ')';
        return;
    default:
        out += '(';
        render_node(*n.lhs, out);
        out += infix_symbol(n.op);
        render_node(*n.rhs, out);
        out += ')';
        return;
    }
}

struct Failure {
    NodePtr node = nullptr;
    const char* message = nullptr;
};

bool fail(Failure& f, NodePtr n, const char* msg) {
    f.node = n;
    f.message = msg;
    return false;
}

bool eval_node(NodePtr n, double x, double& out, Failure& failure) {
    double a = 0.0;
    double b = 0.0;
    switch (arity(n->op)) {
    case 2:
        if (!eval_node(n->rhs.get(), x, b, failure)) return false;
        [[fallthrough]];
    case 1:
        if (!eval_node(n->lhs.get(), x, a, failure)) return false;
        break;
    default:
        break;
    }

    double r = 0.0;
    switch (n->op) {
    case Op::Constant: r = n->value; break;
    case Op::Variable: r = x; break;
    case Op::Neg: r = -a; break;
    case Op::Exp: r = std::exp(a); break;
    case Op::Log:
        if (a <= 0.0) return fail(failure, n, "log of nonpositive value");
        r = std::log(a);
        break;
    case Op::Abs: r = std::fabs(a); break;
    case Op::Sqrt:
        if (a < 0.0) return fail(failure, n, "sqrt of negative value");
        r = std::sqrt(a);
        break;
    case Op::Add: r = a + b; break;
    case Op::Sub: r = a - b; break;
    case Op::Mul: r = a * b; break;
    case Op::Div:
        if (b == 0.0) return fail(failure, n, "division by zero");
        r = a / b;
        break;
    case Op::Pow:
        if (a == 0.0 && b < 0.0) return fail(failure, n, "zero raised to a negative power");
        if (a < 0.0 && std::trunc(b) != b)
            return fail(failure, n, "negative base with non-integer exponent");
        r = std::pow(a, b);
        break;
    case Op::Min: r = std::fmin(a, b); break;
    case Op::Max: r = std::fmax(a, b); break;
    }
    if (!std::isfinite(r)) return fail(failure, n, "non-finite result");
    out = r;
    return true;
}

std::shared_ptr<const Expr::Node> substitute_node(const std::shared_ptr<const Expr::Node>& n,
                                                  const std::shared_ptr<const Expr::Node>& inner) {
    switch (arity(n->op)) {
    case 0:
        return n->op == Op::Variable ? inner : n;
    case 1:
        return std::make_shared<const Expr::Node>(
            Expr::Node{n->op, 0.0, substitute_node(n->lhs, inner), nullptr});
    default:
        return std::make_shared<const Expr::Node>(Expr::Node{
            n->op, 0.0, substitute_node(n->lhs, inner), substitute_node(n->rhs, inner)});
    }
}

bool same_tree(NodePtr a, NodePtr b) {
    if (a == b) return true;
    if (!a || !b || a->op != b->op) return false;
    if (a->op == Op::Constant) {
        return a->value == b->value && std::signbit(a->value) == std::signbit(b->value);
    }
    return same_tree(a->lhs.get(), b->lhs.get()) && same_tree(a->rhs.get(), b->rhs.get());
}

}  // namespace

std::optional<double> Expr::try_eval(double x, EvalFailure* why) const {
    Failure failure;
    double out = 0.0;
    if (!std::isfinite(x)) {
        failure = {node_.get(), "non-finite argument"};
    } else if (eval_node(node_.get(), x, out, failure)) {
        return out;
    }
    if (why) {
        why->message = failure.message;
        why->node.clear();
        render_node(*failure.node, why->node);
    }
    return std::nullopt;
}

double Expr::eval(double x) const {
    EvalFailure why;
    auto v = try_eval(x, &why);
    if (!v) throw EvalError(why.message, why.node, x);
    return *v;
}

std::string Expr::render() const {
    std::string out;
    render_node(*node_, out);
    return out;
}

Expr Expr::substitute(const Expr& inner) const {
    return Expr(substitute_node(node_, inner.node_));
}

bool operator==(const Expr& a, const Expr& b) { return same_tree(a.node_.get(), b.node_.get()); }

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr parse_all() {
        Expr e = expr();
        skip_space();
        if (pos_ < text_.size()) error("unexpected character '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void error(const std::string& what) const { throw ParseError(what, pos_ + 1); }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool accept(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= text_.size()) error(std::string("expected '") + c + "' but input ended");
            error(std::string("expected '") + c + "'");
        }
    }

    Expr expr() {
        Expr lhs = term();
        for (;;) {
            if (accept('+')) lhs = Expr::binary(Op::Add, lhs, term());
            else if (accept('-')) lhs = Expr::binary(Op::Sub, lhs, term());
            else return lhs;
        }
    }

    Expr term() {
        Expr lhs = factor();
        for (;;) {
            if (accept('*')) lhs = Expr::binary(Op::Mul, lhs, factor());
            else if (accept('/')) lhs = Expr::binary(Op::Div, lhs, factor());
            else return lhs;
        }
    }

    Expr factor() {
        if (accept('-')) {
            if (starts_number()) {
                std::size_t save = pos_;
                double v = number();
                if (peek() != '^') return Expr::constant(-v);
                pos_ = save;
            }
            return Expr::unary(Op::Neg, factor());
        }
        Expr base = atom();
        if (accept('^')) return Expr::binary(Op::Pow, base, factor());
        return base;
    }

    bool starts_number() {
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) return true;
        return c == '.' && pos_ + 1 < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]));
    }

    double number() {
        skip_space();
        std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        };
        digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            std::size_t exp_start = pos_;
            digits();
            if (pos_ == exp_start) error("malformed exponent in numeric literal");
        }
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (ec != std::errc() || ptr != text_.data() + pos_) {
            pos_ = start;
            error("malformed numeric literal");
        }
        return v;
    }

    Expr atom() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            Expr inner = expr();
            expect(')');
            return inner;
        }
        if (starts_number()) return Expr::constant(number());
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return call();
        if (c == '\0') error("unexpected end of input");
        error("unexpected character '" + std::string(1, c) + "'");
    }

    Expr call() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string_view name = text_.substr(start, pos_ - start);
        if (name == "x") return Expr::variable();

        Op op;
        if (name == "exp") op = Op::Exp;
        else if (name == "log") op = Op::Log;
        else if (name == "abs") op = Op::Abs;
        else if (name == "sqrt") op = Op::Sqrt;
        else if (name == "min") op = Op::Min;
        else if (name == "max") op = Op::Max;
        else {
            pos_ = start;
            error("unknown identifier '" + std::string(name) + "'");
        }

        expect('(');
        Expr first = expr();
        if (arity(op) == 2) {
            expect(',');
            Expr second = expr();
            expect(')');
            return Expr::binary(op, first, second);
        }
        if (peek() == ',') error(std::string(name) + " takes one argument");
        expect(')');
        return Expr::unary(op, first);
    }
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace phiconvex

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace phiconvex {

enum class Op {
    Constant,
    Variable,
    Neg,
    Exp,
    Log,
    Abs,
    Sqrt,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Min,
    Max,
};

int arity(Op op) noexcept;

/// Why an evaluation failed; carried by try_eval so hot loops can skip exceptions.
struct EvalFailure {
    std::string message;
    std::string node;
};

/// Immutable abstract syntax tree of a univariate real expression in `x`.
/// Copies share structure; evaluation is pure and thread-safe.
class Expr {
public:
    struct Node;

    static Expr constant(double value);
    static Expr variable();
    static Expr unary(Op op, Expr child);
    static Expr binary(Op op, Expr lhs, Expr rhs);

    Op op() const noexcept;
    double value() const noexcept;  // only meaningful for Op::Constant
    Expr child(int i) const;         // 0 = lhs/only child, 1 = rhs

    /// Throws EvalError on domain violations or non-finite intermediate results.
    double eval(double x) const;
    std::optional<double> try_eval(double x, EvalFailure* why = nullptr) const;

    /// Fully parenthesised text that parses back to a structurally identical tree.
    std::string render() const;

    /// Replace every occurrence of the variable with `inner` (builds f∘g from f and g).
    Expr substitute(const Expr& inner) const;

    friend bool operator==(const Expr& a, const Expr& b);

private:
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Parse text using the grammar
///   expr := term (('+'|'-') term)*
///   term := factor (('*'|'/') factor)*
///   factor := '-' factor | atom ('^' factor)?     so -x^2 == -(x^2), x^-1 is legal
///   atom := number | 'x' | ident '(' expr (',' expr)? ')' | '(' expr ')'
/// A '-' directly followed by a numeric literal that is not raised to a power
/// folds into a negative constant.
Expr parse(std::string_view text);

}  // namespace phiconvex

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace phiconvex {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `column` is 1-based and points at the offending token
/// (one past the end for unexpected end of input).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t column)
        : Error(what + " at column " + std::to_string(column)), column_(column) {}

    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

/// A node of an expression could not produce a finite real value.
class EvalError : public Error {
public:
    EvalError(const std::string& what, std::string node, double x)
        : Error(what + " in '" + node + "' at x=" + std::to_string(x)),
          node_(std::move(node)), x_(x) {}

    const std::string& node() const noexcept { return node_; }
    double x() const noexcept { return x_; }

private:
    std::string node_;
    double x_;
};

/// A function value violates the codomain a convexity class requires.
class CodomainError : public Error {
public:
    using Error::Error;
};

/// Argument outside the domain of an operation (t outside (0,1), bad instance, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

}  // namespace phiconvex

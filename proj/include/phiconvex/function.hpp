#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phiconvex/expr.hpp"

namespace phiconvex {

// Hypothesis and range tolerances, far below any theorem-margin tolerance.
inline constexpr double kEpsHypothesis = 1e-9;
inline constexpr double kEpsRange = 1e-9;
inline constexpr double kEpsEval = 1e-12;
inline constexpr double kEpsPositive = 1e-12;

struct Interval {
    double lo;
    double hi;

    double width() const noexcept { return hi - lo; }
    bool contains(double x, double slack = 0.0) const noexcept {
        return x >= lo - slack && x <= hi + slack;
    }
};

/// `n` equally spaced points including both endpoints; a single point is the midpoint.
std::vector<double> uniform_grid(Interval iv, std::size_t n);

enum class Codomain { Unconstrained, Nonnegative, StrictlyPositive };

std::string_view to_string(Codomain c) noexcept;
bool satisfies(Codomain c, double value) noexcept;

/// An expression restricted to a closed interval [a, b] with a < b.
class RealFunction {
public:
    RealFunction(Expr expr, Interval domain, Codomain codomain = Codomain::Unconstrained);
    RealFunction(std::string_view text, Interval domain, Codomain codomain = Codomain::Unconstrained);

    const Expr& expr() const noexcept { return expr_; }
    Interval domain() const noexcept { return domain_; }
    Codomain codomain() const noexcept { return codomain_; }

    double operator()(double x) const { return expr_.eval(x); }
    std::optional<double> try_eval(double x, EvalFailure* why = nullptr) const {
        return expr_.try_eval(x, why);
    }

    RealFunction with_codomain(Codomain c) const { return RealFunction(expr_, domain_, c); }

    /// (*this)∘inner on inner's domain.
    RealFunction compose(const RealFunction& inner) const;

private:
    Expr expr_;
    Interval domain_;
    Codomain codomain_;
};

/// Self-map φ of the working interval. Range containment is checked by check_range,
/// not enforced at construction.
class PhiMap {
public:
    explicit PhiMap(RealFunction fn) : fn_(std::move(fn)) {}

    static PhiMap identity(Interval iv) { return PhiMap(RealFunction(Expr::variable(), iv)); }

    const RealFunction& fn() const noexcept { return fn_; }
    Interval interval() const noexcept { return fn_.domain(); }
    double operator()(double x) const { return fn_(x); }

private:
    RealFunction fn_;
};

/// Outcome of a sampled structural test. `pass` only means no violation was found.
struct HypothesisResult {
    bool pass = true;
    double worst = 0.0;           // largest defect / excursion / inversion seen
    std::vector<double> location;  // x, or (x, y, lambda)
    std::size_t samples = 0;
};

HypothesisResult check_range(const PhiMap& phi, std::size_t grid_n);
HypothesisResult check_affine(const PhiMap& phi, std::size_t samples, std::uint64_t seed);
HypothesisResult check_convex_map(const PhiMap& phi, std::size_t samples, std::uint64_t seed);
HypothesisResult check_increasing(const RealFunction& f, std::size_t grid_n);

}  // namespace phiconvex

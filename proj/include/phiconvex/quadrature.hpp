#pragma once

#include <cstddef>
#include <functional>

namespace phiconvex {

inline constexpr double kDefaultQuadTol = 1e-9;
inline constexpr int kMaxQuadDepth = 50;

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;  // sum of local Richardson estimates, >= 0
    std::size_t evaluations = 0;
    bool tolerance_met = true;    // false when some panel hit the depth limit first
};

/// Adaptive Simpson on [lo, hi] with local Richardson extrapolation. The integrand may
/// throw; exceptions propagate. Non-finite integrand values raise EvalError.
QuadratureResult integrate(const std::function<double(double)>& g, double lo, double hi,
                           double tol = kDefaultQuadTol, int max_depth = kMaxQuadDepth);

}  // namespace phiconvex

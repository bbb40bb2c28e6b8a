#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "phiconvex/quadrature.hpp"
#include "phiconvex/random.hpp"
#include "phiconvex/verifier.hpp"

namespace phiconvex {

/// How a theorem check relates to the theorem's prediction.
enum class TheoremStatus {
    Consistent,   // premises hold numerically and the conclusion was not falsified
    Discrepancy,  // premises hold numerically but the conclusion failed
    Vacuous,      // premises failed, so the conclusion is not predicted
};

std::string_view to_string(TheoremStatus s) noexcept;

struct CompositionResult {
    HypothesisReport hypotheses;
    ConvexityClass target;
    Verdict verdict;  // on f∘φ with the identity map

    bool hypotheses_verified() const noexcept {
        return hypotheses.branch_i() || hypotheses.branch_ii();
    }
    TheoremStatus status() const noexcept;
};

/// Class the composite f∘φ should belong to (φ = identity form of the premise class).
ConvexityClass composition_target(TheoremId id, double s);

CompositionResult check_composition(TheoremId id, const RealFunction& f, const PhiMap& phi,
                                    const SearchBudget& budget, double s = 0.5,
                                    const VerifyOptions& options = {});

inline constexpr double kWeightSumTol = 1e-12;

/// Weights t_i in (0,1) summing to 1 and points x_i in the working interval.
struct JensenInstance {
    std::vector<double> weights;
    std::vector<double> points;

    /// Throws DomainError on length mismatch, n < 2, a weight outside (0,1),
    /// |Σt_i - 1| > kWeightSumTol, or a point outside `iv`.
    void validate(Interval iv) const;
};

/// n random weights (last one closes the sum) and n uniform points in iv.
JensenInstance random_instance(Rng& rng, std::size_t n, Interval iv);

struct JensenResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    /// B_1 = f(Σ t_i φ(x_i)), B_k follows the T_{n-1}, T_{n-2}, ... reduction, B_n = rhs.
    std::vector<double> chain;

    /// Largest drop B_k - B_{k+1} along the chain (<= 0 for a non-decreasing chain).
    double worst_chain_drop() const noexcept;
};

/// Supports φ_h classes (Power, Identity as Power 1, Reciprocal, One) and φ-quasi-convex.
JensenResult jensen_margin(const ConvexityClass& cls, const RealFunction& f, const PhiMap& phi,
                           const JensenInstance& instance);

inline constexpr double kEpsDegenerate = 1e-12;

struct IntegralCheck {
    double mean = 0.0;   // integral mean over the φ-image interval
    double bound = 0.0;  // right-hand side of the inequality
    double margin = 0.0; // bound - mean
    bool degenerate = false;
    QuadratureResult quadrature;
};

/// Geometric-mean integral bound on [φ(a), φ(b)]; f must be strictly positive there.
IntegralCheck hh_geometric_margin(const RealFunction& f, const PhiMap& phi, double a, double b,
                                  double tol = kDefaultQuadTol);

/// Integral mean of f on [φ(x), φ(y)] against max{f(φ(x)), f(φ(y))}; requires x < y.
IntegralCheck quasi_integral_margin(const RealFunction& f, const PhiMap& phi, double x, double y,
                                    double tol = kDefaultQuadTol);

}  // namespace phiconvex

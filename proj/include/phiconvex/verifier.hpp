#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "phiconvex/classes.hpp"
#include "phiconvex/minimize.hpp"

namespace phiconvex {

/// Result of a counterexample search. A missing witness means "no counterexample
/// found", never a proof of membership.
struct Verdict {
    std::optional<DefectPoint> witness;
    double min_margin_observed = 0.0;
    std::size_t points_tested = 0;
    std::size_t eval_failures = 0;

    bool falsified() const noexcept { return witness.has_value(); }
    std::string_view label() const noexcept {
        return falsified() ? "falsified" : "no counterexample found";
    }
};

struct VerifyOptions {
    unsigned threads = 1;
};

/// Searches (x, y, t) for a point where the class inequality fails by more than
/// budget.tol_margin. The codomain of f is checked first on a sampling grid over the
/// range of φ; a violation there throws CodomainError. More than half of the grid
/// failing to evaluate throws Error.
Verdict falsify_membership(const RealFunction& f, const PhiMap& phi, const ConvexityClass& cls,
                           const SearchBudget& budget, const VerifyOptions& options = {});

/// Recomputes a witness from scratch; true when it still violates by more than tol_margin.
bool revalidate(const ConvexityClass& cls, const RealFunction& f, const PhiMap& phi,
                const DefectPoint& witness, double tol_margin);

enum class TheoremId {
    T2_1, T2_2, T2_4, T2_6, T2_7, T2_9, T2_12, T2_13, T2_15, T2_16, T2_17,
};

/// "thm-2.1" style names; the bare "2.1" form is accepted as well.
TheoremId parse_theorem_id(std::string_view text);
std::string to_string(TheoremId id);
bool is_composition_theorem(TheoremId id) noexcept;
bool is_jensen_theorem(TheoremId id) noexcept;
bool is_integral_theorem(TheoremId id) noexcept;

/// Class whose membership the theorem assumes of f (s is used by thm-2.1 / thm-2.2).
ConvexityClass premise_class(TheoremId id, double s);

/// Sampled hypotheses of the two composition branches:
/// (i) φ affine, (ii) f increasing and φ convex; both also need φ into [a,b] and the premise class.
struct HypothesisReport {
    TheoremId theorem;
    ConvexityClass premise;
    Verdict premise_verdict;
    HypothesisResult range;
    HypothesisResult affine;
    HypothesisResult convex_map;
    HypothesisResult increasing;

    bool premise_holds() const noexcept { return range.pass && !premise_verdict.falsified(); }
    bool branch_i() const noexcept { return premise_holds() && affine.pass; }
    bool branch_ii() const noexcept { return premise_holds() && increasing.pass && convex_map.pass; }
};

inline constexpr std::size_t kHypothesisSamples = 2000;
inline constexpr std::size_t kHypothesisGrid = 1001;

HypothesisReport check_hypotheses(TheoremId id, const RealFunction& f, const PhiMap& phi,
                                  const SearchBudget& budget, double s = 0.5,
                                  const VerifyOptions& options = {});

}  // namespace phiconvex

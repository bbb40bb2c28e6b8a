#include "phiconvex/verifier.hpp"

#include <algorithm>
#include <cmath>

#include "phiconvex/error.hpp"

namespace phiconvex {

namespace {

void check_codomain_on_grid(const RealFunction& f, const PhiMap& phi, const ConvexityClass& cls,
                            std::size_t grid_n) {
    const std::size_t n = std::max<std::size_t>(grid_n, 2);
    std::vector<double> values;
    for (double x : uniform_grid(phi.interval(), n)) {
        if (auto v = phi.fn().try_eval(x)) values.push_back(*v);
    }
    if (values.empty()) return;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*hi > *lo) {
        for (double u : uniform_grid({*lo, *hi}, n)) values.push_back(u);
    }
    for (double u : values) {
        auto v = f.try_eval(u);
        if (v && !satisfies(cls.codomain(), *v)) {
            throw CodomainError(cls.name() + " requires f " + std::string(to_string(cls.codomain())) +
                                " but f(" + std::to_string(u) + ") = " + std::to_string(*v));
        }
    }
}

}  // namespace

Verdict falsify_membership(const RealFunction& f, const PhiMap& phi, const ConvexityClass& cls,
                           const SearchBudget& budget, const VerifyOptions& options) {
    budget.validate();
    check_codomain_on_grid(f, phi, cls, budget.grid_per_axis);

    const Interval iv = phi.interval();
    const Box3 box{iv, iv, cls.search_t_range()};
    const Objective3 objective = [&](const Point3& p) {
        return defect(cls, f, phi, p[0], p[1], p[2]).margin;
    };
    const MinimizeResult m = minimize(objective, box, budget, options.threads);

    if (2 * m.grid_failures > m.grid_points) {
        throw Error("evaluation failed at " + std::to_string(m.grid_failures) + " of " +
                    std::to_string(m.grid_points) + " grid points for " + cls.name());
    }

    Verdict v;
    v.min_margin_observed = m.value;
    v.points_tested = m.evaluations;
    v.eval_failures = m.failures;
    if (m.value < -budget.tol_margin) {
        // Fresh evaluation; the search value is not trusted on its own.
        const DefectPoint w = defect(cls, f, phi, m.point[0], m.point[1], m.point[2]);
        if (w.margin < -budget.tol_margin) v.witness = w;
        v.min_margin_observed = w.margin;
    }
    return v;
}

bool revalidate(const ConvexityClass& cls, const RealFunction& f, const PhiMap& phi,
                const DefectPoint& witness, double tol_margin) {
    return defect(cls, f, phi, witness.x, witness.y, witness.t).margin < -tol_margin;
}

TheoremId parse_theorem_id(std::string_view text) {
    if (text.starts_with("thm-")) text.remove_prefix(4);
    static constexpr std::pair<std::string_view, TheoremId> table[] = {
        {"2.1", TheoremId::T2_1},   {"2.2", TheoremId::T2_2},   {"2.4", TheoremId::T2_4},
        {"2.6", TheoremId::T2_6},   {"2.7", TheoremId::T2_7},   {"2.9", TheoremId::T2_9},
        {"2.12", TheoremId::T2_12}, {"2.13", TheoremId::T2_13}, {"2.15", TheoremId::T2_15},
        {"2.16", TheoremId::T2_16}, {"2.17", TheoremId::T2_17},
    };
    for (const auto& [name, id] : table) {
        if (name == text) return id;
    }
    throw DomainError("unknown theorem '" + std::string(text) + "'");
}

std::string to_string(TheoremId id) {
    switch (id) {
    case TheoremId::T2_1: return "thm-2.1";
    case TheoremId::T2_2: return "thm-2.2";
    case TheoremId::T2_4: return "thm-2.4";
    case TheoremId::T2_6: return "thm-2.6";
    case TheoremId::T2_7: return "thm-2.7";
    case TheoremId::T2_9: return "thm-2.9";
    case TheoremId::T2_12: return "thm-2.12";
    case TheoremId::T2_13: return "thm-2.13";
    case TheoremId::T2_15: return "thm-2.15";
    case TheoremId::T2_16: return "thm-2.16";
    case TheoremId::T2_17: return "thm-2.17";
    }
    return "?";
}

bool is_composition_theorem(TheoremId id) noexcept {
    return id == TheoremId::T2_1 || id == TheoremId::T2_4 || id == TheoremId::T2_7 ||
           id == TheoremId::T2_12 || id == TheoremId::T2_15;
}

bool is_jensen_theorem(TheoremId id) noexcept {
    return id == TheoremId::T2_2 || id == TheoremId::T2_6 || id == TheoremId::T2_9 ||
           id == TheoremId::T2_17;
}

bool is_integral_theorem(TheoremId id) noexcept {
    return id == TheoremId::T2_13 || id == TheoremId::T2_16;
}

ConvexityClass premise_class(TheoremId id, double s) {
    switch (id) {
    case TheoremId::T2_1:
    case TheoremId::T2_2: return ConvexityClass::phi_h(HSpec::power(s));
    case TheoremId::T2_4:
    case TheoremId::T2_6: return ConvexityClass::phi_h(HSpec::reciprocal());
    case TheoremId::T2_7:
    case TheoremId::T2_9: return ConvexityClass::phi_h(HSpec::one());
    case TheoremId::T2_12:
    case TheoremId::T2_13: return ConvexityClass::log_phi();
    case TheoremId::T2_15:
    case TheoremId::T2_16:
    case TheoremId::T2_17: return ConvexityClass::quasi_phi();
    }
    throw DomainError("unknown theorem");
}

HypothesisReport check_hypotheses(TheoremId id, const RealFunction& f, const PhiMap& phi,
                                  const SearchBudget& budget, double s,
                                  const VerifyOptions& options) {
    if (!is_composition_theorem(id)) {
        throw DomainError(to_string(id) + " has no composition hypotheses");
    }
    const ConvexityClass premise = premise_class(id, s);
    return HypothesisReport{
        id,
        premise,
        falsify_membership(f, phi, premise, budget, options),
        check_range(phi, kHypothesisGrid),
        check_affine(phi, kHypothesisSamples, budget.seed),
        check_convex_map(phi, kHypothesisSamples, budget.seed),
        check_increasing(f, kHypothesisGrid),
    };
}

}  // namespace phiconvex

#include "phiconvex/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "phiconvex/error.hpp"

namespace phiconvex {

std::string_view to_string(TheoremStatus s) noexcept {
    switch (s) {
    case TheoremStatus::Consistent: return "consistent";
    case TheoremStatus::Discrepancy: return "discrepancy";
    case TheoremStatus::Vacuous: return "vacuous";
    }
    return "?";
}

TheoremStatus CompositionResult::status() const noexcept {
    if (!hypotheses_verified()) return TheoremStatus::Vacuous;
    return verdict.falsified() ? TheoremStatus::Discrepancy : TheoremStatus::Consistent;
}

ConvexityClass composition_target(TheoremId id, double s) {
    if (!is_composition_theorem(id)) throw DomainError(to_string(id) + " is not a composition theorem");
    // The plain classes are the φ-classes with φ = identity.
    return premise_class(id, s);
}

CompositionResult check_composition(TheoremId id, const RealFunction& f, const PhiMap& phi,
                                    const SearchBudget& budget, double s,
                                    const VerifyOptions& options) {
    HypothesisReport hyp = check_hypotheses(id, f, phi, budget, s, options);
    const ConvexityClass target = composition_target(id, s);
    const RealFunction composite = f.compose(phi.fn());
    Verdict v = falsify_membership(composite, PhiMap::identity(phi.interval()), target, budget,
                                   options);
    return CompositionResult{std::move(hyp), target, std::move(v)};
}

void JensenInstance::validate(Interval iv) const {
    if (weights.size() != points.size()) throw DomainError("weights and points differ in length");
    if (weights.size() < 2) throw DomainError("a Jensen instance needs n >= 2 points");
    double sum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!(weights[i] > 0.0 && weights[i] < 1.0)) {
            throw DomainError("weight " + std::to_string(i + 1) + " is outside (0, 1)");
        }
        if (!iv.contains(points[i])) {
            throw DomainError("point " + std::to_string(i + 1) + " is outside the working interval");
        }
        sum += weights[i];
    }
    if (std::fabs(sum - 1.0) > kWeightSumTol) {
        throw DomainError("weights sum to " + std::to_string(sum) + ", not 1");
    }
}

JensenInstance random_instance(Rng& rng, std::size_t n, Interval iv) {
    if (n < 2) throw DomainError("a Jensen instance needs n >= 2 points");
    std::vector<double> raw(n);
    double total = 0.0;
    for (auto& w : raw) {
        w = 0.05 + unit_uniform(rng);
        total += w;
    }
    JensenInstance inst;
    double head = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        inst.weights.push_back(raw[i] / total);
        head += inst.weights.back();
    }
    inst.weights.push_back(1.0 - head);
    for (std::size_t i = 0; i < n; ++i) inst.points.push_back(uniform_in(rng, iv.lo, iv.hi));
    return inst;
}

double JensenResult::worst_chain_drop() const noexcept {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) worst = std::max(worst, chain[k] - chain[k + 1]);
    return worst;
}

namespace {

double class_value(const ConvexityClass& cls, const RealFunction& f, double u) {
    const double v = f(u);
    if (!satisfies(cls.codomain(), v)) {
        throw CodomainError(cls.name() + " requires f " + std::string(to_string(cls.codomain())) +
                            " but f(" + std::to_string(u) + ") = " + std::to_string(v));
    }
    return v;
}

}  // namespace

JensenResult jensen_margin(const ConvexityClass& cls, const RealFunction& f, const PhiMap& phi,
                           const JensenInstance& instance) {
    const Interval iv = phi.interval();
    instance.validate(iv);
    if (cls.kind() == ConvexityClass::Kind::LogPhi) {
        throw DomainError("no Jensen-type inequality is checked for log-phi-convex");
    }
    const bool quasi = cls.kind() == ConvexityClass::Kind::QuasiPhi;
    const HSpec::Kind hk = cls.h().kind;
    const double s = hk == HSpec::Kind::Power ? cls.h().s : 1.0;
    const bool reciprocal = !quasi && hk == HSpec::Kind::Reciprocal;
    const bool one = !quasi && hk == HSpec::Kind::One;

    const auto& t = instance.weights;
    const std::size_t n = t.size();
    std::vector<double> image(n);
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
        image[i] = phi(instance.points[i]);
        values[i] = class_value(cls, f, image[i]);
    }

    // Term contributed by a single point in the final bound.
    auto term = [&](std::size_t i) {
        if (reciprocal) return values[i] / t[i];
        if (one) return values[i];
        return std::pow(t[i], s) * values[i];
    };
    // Bound with the first k points still merged into their normalised combination.
    auto head = [&](double weight, double value) {
        if (reciprocal) return value / weight;
        if (one) return value;
        return std::pow(weight, s) * value;
    };

    const Interval fdom = f.domain();
    auto merged_value = [&](std::size_t k, double weighted_sum, double weight) {
        double m = weighted_sum / weight;
        if (!fdom.contains(m, kEpsRange)) {
            throw DomainError("partial combination k=" + std::to_string(k) + " at " +
                              std::to_string(m) + " escapes the domain of f");
        }
        return class_value(cls, f, std::clamp(m, fdom.lo, fdom.hi));
    };

    std::vector<double> prefix_weight(n);
    std::vector<double> prefix_sum(n);
    double tw = 0.0;
    double ts = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        tw += t[i];
        ts += t[i] * image[i];
        prefix_weight[i] = tw;
        prefix_sum[i] = ts;
    }

    JensenResult r;
    r.lhs = merged_value(n, prefix_sum[n - 1], 1.0);
    if (quasi) {
        r.rhs = *std::max_element(values.begin(), values.end());
    } else {
        r.rhs = 0.0;
        for (std::size_t i = 0; i < n; ++i) r.rhs += term(i);
    }
    r.margin = r.rhs - r.lhs;

    r.chain.push_back(r.lhs);
    double tail = quasi ? -std::numeric_limits<double>::infinity() : 0.0;
    for (std::size_t k = n - 1; k >= 1; --k) {
        // Split off point k+1 (1-based): tail now covers points k+1..n.
        tail = quasi ? std::max(tail, values[k]) : tail + term(k);
        const double merged =
            k == 1 ? values[0] : merged_value(k, prefix_sum[k - 1], prefix_weight[k - 1]);
        const double bound = quasi ? std::max(merged, tail)
                                   : head(k == 1 ? t[0] : prefix_weight[k - 1], merged) + tail;
        r.chain.push_back(bound);
    }
    return r;
}

IntegralCheck hh_geometric_margin(const RealFunction& f, const PhiMap& phi, double a, double b,
                                  double tol) {
    const ConvexityClass log_class = ConvexityClass::log_phi();
    const double u = phi(a);
    const double v = phi(b);
    const double fu = class_value(log_class, f, u);
    const double fv = class_value(log_class, f, v);

    IntegralCheck r;
    r.bound = std::sqrt(fu * fv);
    if (std::fabs(v - u) <= kEpsDegenerate) {
        r.degenerate = true;
        r.mean = r.bound;
        return r;
    }
    const double lo = std::min(u, v);
    const double hi = std::max(u, v);
    const double reflect = u + v;
    auto integrand = [&](double x) {
        return std::sqrt(class_value(log_class, f, x) * class_value(log_class, f, reflect - x));
    };
    r.quadrature = integrate(integrand, lo, hi, tol);
    r.mean = r.quadrature.value / (hi - lo);
    r.margin = r.bound - r.mean;
    return r;
}

IntegralCheck quasi_integral_margin(const RealFunction& f, const PhiMap& phi, double x, double y,
                                    double tol) {
    if (!(x < y)) throw DomainError("quasi integral check requires x < y");
    const double u = phi(x);
    const double v = phi(y);
    const double fu = f(u);
    const double fv = f(v);

    IntegralCheck r;
    r.bound = std::max(fu, fv);
    if (std::fabs(v - u) <= kEpsDegenerate) {
        r.degenerate = true;
        r.mean = r.bound;
        return r;
    }
    const double lo = std::min(u, v);
    const double hi = std::max(u, v);
    r.quadrature = integrate([&](double w) { return f(w); }, lo, hi, tol);
    r.mean = r.quadrature.value / (hi - lo);
    r.margin = r.bound - r.mean;
    return r;
}

}  // namespace phiconvex

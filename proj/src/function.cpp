#include "phiconvex/function.hpp"

#include <algorithm>
#include <cmath>

#include "phiconvex/error.hpp"
#include "phiconvex/random.hpp"

namespace phiconvex {

std::vector<double> uniform_grid(Interval iv, std::size_t n) {
    if (n == 0) return {};
    if (n == 1) return {0.5 * (iv.lo + iv.hi)};
    std::vector<double> pts(n);
    const double step = iv.width() / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) pts[i] = iv.lo + step * static_cast<double>(i);
    pts.back() = iv.hi;
    return pts;
}

std::string_view to_string(Codomain c) noexcept {
    switch (c) {
    case Codomain::Unconstrained: return "unconstrained";
    case Codomain::Nonnegative: return "nonnegative";
    case Codomain::StrictlyPositive: return "strictly_positive";
    }
    return "?";
}

bool satisfies(Codomain c, double value) noexcept {
    switch (c) {
    case Codomain::Unconstrained: return true;
    case Codomain::Nonnegative: return value >= -kEpsEval;
    case Codomain::StrictlyPositive: return value >= kEpsPositive;
    }
    return false;
}

RealFunction::RealFunction(Expr expr, Interval domain, Codomain codomain)
    : expr_(std::move(expr)), domain_(domain), codomain_(codomain) {
    if (!std::isfinite(domain.lo) || !std::isfinite(domain.hi) || !(domain.lo < domain.hi)) {
        throw DomainError("function domain must be a finite interval [a, b] with a < b");
    }
}

RealFunction::RealFunction(std::string_view text, Interval domain, Codomain codomain)
    : RealFunction(parse(text), domain, codomain) {}

RealFunction RealFunction::compose(const RealFunction& inner) const {
    return RealFunction(expr_.substitute(inner.expr()), inner.domain(), codomain_);
}

HypothesisResult check_range(const PhiMap& phi, std::size_t grid_n) {
    if (grid_n < 2) throw DomainError("check_range needs at least 2 grid points");
    const Interval iv = phi.interval();
    HypothesisResult r;
    for (double x : uniform_grid(iv, grid_n)) {
        const double v = phi(x);
        const double excursion = std::max(iv.lo - v, v - iv.hi);
        if (r.samples == 0 || excursion > r.worst) {
            r.worst = excursion;
            r.location = {x, v};
        }
        ++r.samples;
    }
    r.pass = r.worst <= kEpsRange;
    return r;
}

namespace {

// Sampled two-point test; `defect` returns the violation amount (> eps fails).
template <class Defect>
HypothesisResult sample_pairs(const PhiMap& phi, std::size_t samples, std::uint64_t seed,
                              Defect defect) {
    if (samples < 1) throw DomainError("at least one sample is required");
    const Interval iv = phi.interval();
    Rng rng(seed);
    HypothesisResult r;
    auto visit = [&](double x, double y, double lambda) {
        const double mix = std::clamp(lambda * x + (1.0 - lambda) * y, iv.lo, iv.hi);
        const double d = defect(phi(mix), lambda * phi(x) + (1.0 - lambda) * phi(y));
        if (r.samples == 0 || d > r.worst) {
            r.worst = d;
            r.location = {x, y, lambda};
        }
        ++r.samples;
    };
    // Endpoint midpoint first: the widest chord, where curvature shows most.
    visit(iv.lo, iv.hi, 0.5);
    for (std::size_t i = 1; i < samples; ++i) {
        const double x = uniform_in(rng, iv.lo, iv.hi);
        const double y = uniform_in(rng, iv.lo, iv.hi);
        const double lambda = unit_uniform(rng);
        visit(x, y, lambda);
    }
    r.pass = r.worst <= kEpsHypothesis;
    return r;
}

}  // namespace

HypothesisResult check_affine(const PhiMap& phi, std::size_t samples, std::uint64_t seed) {
    return sample_pairs(phi, samples, seed,
                        [](double at_mix, double chord) { return std::fabs(at_mix - chord); });
}

HypothesisResult check_convex_map(const PhiMap& phi, std::size_t samples, std::uint64_t seed) {
    return sample_pairs(phi, samples, seed,
                        [](double at_mix, double chord) { return at_mix - chord; });
}

HypothesisResult check_increasing(const RealFunction& f, std::size_t grid_n) {
    if (grid_n < 2) throw DomainError("check_increasing needs at least 2 grid points");
    const auto grid = uniform_grid(f.domain(), grid_n);
    HypothesisResult r;
    double prev = f(grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double cur = f(grid[i]);
        const double inversion = prev - cur;
        if (r.samples == 0 || inversion > r.worst) {
            r.worst = inversion;
            r.location = {grid[i - 1], grid[i]};
        }
        ++r.samples;
        prev = cur;
    }
    r.pass = r.worst <= kEpsHypothesis;
    return r;
}

}  // namespace phiconvex

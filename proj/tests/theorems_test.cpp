#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "phiconvex/catalog.hpp"
#include "phiconvex/error.hpp"
#include "phiconvex/theorems.hpp"

using namespace phiconvex;

namespace {

constexpr Interval kUnit{0.0, 1.0};

SearchBudget small_budget() {
    SearchBudget b;
    b.grid_per_axis = 15;
    b.restarts = 4;
    return b;
}

PhiMap map(const char* text, Interval iv = kUnit) { return PhiMap(RealFunction(text, iv)); }

// Composite-Simpson oracle, independent of the adaptive integrator.
template <class G>
double composite_simpson(G g, double lo, double hi, std::size_t panels) {
    const double h = (hi - lo) / static_cast<double>(panels);
    double sum = g(lo) + g(hi);
    for (std::size_t i = 1; i < panels; ++i) sum += g(lo + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

}  // namespace

TEST(Composition, ExpOfAffineIsLogConvex) {
    const auto r = check_composition(TheoremId::T2_12, RealFunction("exp(x)", kUnit), map("0.5*x+0.2"),
                                     small_budget());
    EXPECT_TRUE(r.hypotheses.branch_i());
    EXPECT_FALSE(r.verdict.falsified());
    EXPECT_EQ(r.status(), TheoremStatus::Consistent);
    EXPECT_EQ(r.target.name(), "log-phi-convex");
}

TEST(Composition, ConstantIsP) {
    for (const char* phi : {"x", "x^2", "0.5*x+0.25", "sqrt(x)"}) {
        const auto r = check_composition(TheoremId::T2_7, RealFunction("1", kUnit), map(phi), small_budget());
        EXPECT_FALSE(r.verdict.falsified()) << phi;
    }
}

TEST(Composition, IncreasingExpOfConvexSquareIsSConvex) {
    // Brute-force oracle: s-convex (second sense) defect of exp(x^2) on a 101^3 grid.
    const double s = 0.5;
    double oracle_min = INFINITY;
    for (int i = 0; i <= 100; ++i) {
        for (int j = 0; j <= 100; ++j) {
            for (int k = 0; k <= 100; ++k) {
                const double x = i / 100.0, y = j / 100.0;
                const double t = std::clamp(k / 100.0, kDeltaT, 1.0 - kDeltaT);
                const double m = t * x + (1 - t) * y;
                const double margin =
                    std::pow(t, s) * std::exp(x * x) + std::pow(1 - t, s) * std::exp(y * y) - std::exp(m * m);
                oracle_min = std::min(oracle_min, margin);
            }
        }
    }
    EXPECT_GE(oracle_min, 0.0);

    const auto r = check_composition(TheoremId::T2_1, RealFunction("exp(x)", kUnit), map("x^2"), small_budget(), s);
    EXPECT_FALSE(r.hypotheses.branch_i());
    EXPECT_TRUE(r.hypotheses.branch_ii());
    EXPECT_FALSE(r.verdict.falsified());
    EXPECT_EQ(r.status(), TheoremStatus::Consistent);
}

TEST(Composition, FailedPremiseIsVacuous) {
    // The bump is not φ_s-convex, so nothing is predicted about the composite.
    const auto r = check_composition(TheoremId::T2_1, RealFunction("exp(-10*(x-0.5)^2)", kUnit), map("x"),
                                     small_budget(), 0.5);
    EXPECT_TRUE(r.hypotheses.premise_verdict.falsified());
    EXPECT_EQ(r.status(), TheoremStatus::Vacuous);
}

TEST(Jensen, QuasiSquare) {
    const auto r = jensen_margin(ConvexityClass::quasi_phi(), RealFunction("x^2", kUnit), PhiMap::identity(kUnit),
                                 {{0.5, 0.5}, {0.0, 1.0}});
    EXPECT_DOUBLE_EQ(r.lhs, 0.25);
    EXPECT_DOUBLE_EQ(r.rhs, 1.0);
    EXPECT_DOUBLE_EQ(r.margin, 0.75);
}

TEST(Jensen, PConstant) {
    const double c = 1.75;
    Rng rng(8);
    for (std::size_t n = 2; n <= 6; ++n) {
        const auto inst = random_instance(rng, n, kUnit);
        const auto r = jensen_margin(ConvexityClass::phi_h(HSpec::one()), RealFunction("1.75", kUnit),
                                     map("x^2"), inst);
        EXPECT_DOUBLE_EQ(r.margin, static_cast<double>(n - 1) * c);
    }
}

TEST(Jensen, PowerHalfHandValues) {
    const auto r = jensen_margin(ConvexityClass::phi_h(HSpec::power(0.5)), RealFunction("x", kUnit),
                                 PhiMap::identity(kUnit), {{0.25, 0.75}, {0.16, 0.64}});
    const double rhs = 0.5 * 0.16 + std::sqrt(0.75) * 0.64;
    EXPECT_NEAR(r.lhs, 0.52, 1e-15);
    EXPECT_NEAR(r.rhs, rhs, 1e-15);
    EXPECT_NEAR(r.rhs, 0.634256, 1e-6);
    EXPECT_NEAR(r.margin, rhs - 0.52, 1e-15);
    ASSERT_EQ(r.chain.size(), 2u);
    EXPECT_EQ(r.chain.front(), r.lhs);
}

TEST(Jensen, ChainFollowsTelescopingReduction) {
    // n = 3, φ_s with s = 0.5, f = x^2, φ = id; B_2 written out by hand.
    const std::vector<double> t{0.2, 0.3, 0.5};
    const std::vector<double> x{0.1, 0.6, 0.9};
    const auto r = jensen_margin(ConvexityClass::phi_h(HSpec::power(0.5)), RealFunction("x^2", kUnit),
                                 PhiMap::identity(kUnit), {t, x});
    ASSERT_EQ(r.chain.size(), 3u);
    const double m2 = (0.2 * 0.1 + 0.3 * 0.6) / 0.5;
    EXPECT_NEAR(r.chain[1], std::sqrt(0.5) * m2 * m2 + std::sqrt(0.5) * 0.81, 1e-15);
    EXPECT_NEAR(r.chain[2], std::sqrt(0.2) * 0.01 + std::sqrt(0.3) * 0.36 + std::sqrt(0.5) * 0.81, 1e-15);
}

TEST(Jensen, GodunovaLevinChainDividesByPrefixWeight) {
    const std::vector<double> t{0.2, 0.3, 0.5};
    const std::vector<double> x{0.1, 0.6, 0.9};
    const auto r = jensen_margin(ConvexityClass::phi_h(HSpec::reciprocal()), RealFunction("x", kUnit),
                                 PhiMap::identity(kUnit), {t, x});
    const double m2 = (0.2 * 0.1 + 0.3 * 0.6) / 0.5;
    EXPECT_NEAR(r.chain[1], m2 / 0.5 + 0.9 / 0.5, 1e-15);
    EXPECT_NEAR(r.rhs, 0.1 / 0.2 + 0.6 / 0.3 + 0.9 / 0.5, 1e-15);
}

TEST(Jensen, InvalidInstances) {
    const auto cls = ConvexityClass::phi_h(HSpec::one());
    const RealFunction f("x", kUnit);
    const auto id = PhiMap::identity(kUnit);
    EXPECT_THROW((void)jensen_margin(cls, f, id, {{0.5, 0.6}, {0.1, 0.2}}), DomainError);
    EXPECT_THROW((void)jensen_margin(cls, f, id, {{1.0}, {0.1}}), DomainError);
    EXPECT_THROW((void)jensen_margin(cls, f, id, {{0.5, 0.5}, {0.1}}), DomainError);
    EXPECT_THROW((void)jensen_margin(cls, f, id, {{0.5, 0.5}, {0.1, 1.5}}), DomainError);
    EXPECT_THROW((void)jensen_margin(cls, f, id, {{0.0, 1.0}, {0.1, 0.2}}), DomainError);
    EXPECT_THROW((void)jensen_margin(ConvexityClass::log_phi(), RealFunction("exp(x)", kUnit), id,
                                     {{0.5, 0.5}, {0.1, 0.2}}),
                 DomainError);
    // φ leaves the domain of f, so a partial combination does too.
    EXPECT_THROW((void)jensen_margin(cls, f, map("x+2"), {{0.5, 0.5}, {0.1, 0.2}}), DomainError);
}

TEST(JensenProperty, ChainsAndReductions) {
    Rng rng(12);
    for (const auto& e : membership_catalog()) {
        if (!e.member || e.convexity_class().kind() == ConvexityClass::Kind::LogPhi) continue;
        const auto cls = e.convexity_class();
        const auto f = e.function();
        const auto phi = e.map();
        for (int i = 0; i < 40; ++i) {
            const std::size_t n = 2 + rng() % 5;
            auto inst = random_instance(rng, n, e.interval);
            const auto r = jensen_margin(cls, f, phi, inst);
            EXPECT_GE(r.margin, -1e-9) << e.name;
            EXPECT_LE(r.worst_chain_drop(), 1e-9) << e.name;
            EXPECT_NEAR(r.chain.back(), r.rhs, 1e-12) << e.name;
            ASSERT_EQ(r.chain.size(), n);

            // Simultaneous permutation of (t_i, x_i).
            std::vector<std::size_t> perm(n);
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            JensenInstance shuffled;
            for (auto p : perm) {
                shuffled.weights.push_back(inst.weights[p]);
                shuffled.points.push_back(inst.points[p]);
            }
            const double sum = std::accumulate(shuffled.weights.begin(), shuffled.weights.end(), 0.0);
            if (std::fabs(sum - 1.0) <= kWeightSumTol) {
                EXPECT_NEAR(jensen_margin(cls, f, phi, shuffled).margin, r.margin, 1e-12) << e.name;
            }

            // Two points reduce to the pointwise defect.
            const double t1 = inst.weights[0];
            const auto pair = jensen_margin(cls, f, phi, {{t1, 1.0 - t1}, {inst.points[0], inst.points[1]}});
            const auto d = defect(cls, f, phi, inst.points[0], inst.points[1], t1);
            EXPECT_NEAR(pair.margin, d.margin, 1e-12) << e.name;
        }
    }
}

TEST(GeometricIntegral, ConstantHasZeroMargin) {
    for (const char* phi : {"x", "x^2", "0.5*x+0.25"}) {
        const auto r = hh_geometric_margin(RealFunction("3", kUnit), map(phi), 0.0, 1.0);
        EXPECT_NEAR(r.margin, 0.0, 1e-12) << phi;
    }
}

TEST(GeometricIntegral, ExponentialEqualityCase) {
    const auto r = hh_geometric_margin(RealFunction("exp(x)", kUnit), PhiMap::identity(kUnit), 0.0, 1.0);
    EXPECT_NEAR(r.mean, std::exp(0.5), 1e-12);
    EXPECT_NEAR(r.bound, std::exp(0.5), 1e-15);
    EXPECT_LE(std::fabs(r.margin), 1e-8);
    EXPECT_FALSE(r.degenerate);
}

TEST(GeometricIntegral, GaussianAgainstCompositeSimpson) {
    auto g = [](double x) { return std::sqrt(std::exp(x * x) * std::exp((1 - x) * (1 - x))); };
    const double oracle_mean = composite_simpson(g, 0.0, 1.0, std::size_t{1} << 20);
    const double oracle_margin = std::sqrt(std::exp(0.0) * std::exp(1.0)) - oracle_mean;
    const auto r = hh_geometric_margin(RealFunction("exp(x^2)", kUnit), PhiMap::identity(kUnit), 0.0, 1.0);
    EXPECT_GT(r.margin, 0.0);
    EXPECT_NEAR(r.margin, oracle_margin, 1e-8);
}

TEST(GeometricIntegral, DegenerateAndErrors) {
    const auto r = hh_geometric_margin(RealFunction("exp(x)", kUnit), map("0.5"), 0.0, 1.0);
    EXPECT_TRUE(r.degenerate);
    EXPECT_EQ(r.margin, 0.0);
    EXPECT_THROW((void)hh_geometric_margin(RealFunction("x", kUnit), PhiMap::identity(kUnit), 0.0, 1.0),
                 CodomainError);
}

TEST(GeometricIntegralProperty, SymmetricInEndpoints) {
    for (const char* f : {"exp(x^2)", "1/(x+1)", "exp(x)", "x+1"}) {
        for (const char* phi : {"x", "x^2", "0.5*x+0.25", "1-x"}) {
            const auto a = hh_geometric_margin(RealFunction(f, kUnit), map(phi), 0.1, 0.9);
            const auto b = hh_geometric_margin(RealFunction(f, kUnit), map(phi), 0.9, 0.1);
            EXPECT_LE(std::fabs(a.margin - b.margin),
                      a.quadrature.error_estimate + b.quadrature.error_estimate + 1e-15)
                << f << " " << phi;
        }
    }
}

TEST(QuasiIntegral, Examples) {
    const auto id = PhiMap::identity(kUnit);
    const auto c = quasi_integral_margin(RealFunction("2", kUnit), id, 0.0, 1.0);
    EXPECT_NEAR(c.margin, 0.0, 1e-12);
    const auto sq = quasi_integral_margin(RealFunction("x^2", kUnit), id, 0.0, 1.0);
    EXPECT_NEAR(sq.mean, 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(sq.margin, 2.0 / 3.0, 1e-9);
    const auto rt = quasi_integral_margin(RealFunction("sqrt(x)", kUnit), id, 0.0, 1.0);
    EXPECT_NEAR(rt.margin, 1.0 / 3.0, 1e-7);
}

TEST(QuasiIntegral, DegenerateAndErrors) {
    const auto r = quasi_integral_margin(RealFunction("x^2", kUnit), map("abs(x-0.5)"), 0.25, 0.75);
    EXPECT_TRUE(r.degenerate);
    EXPECT_EQ(r.margin, 0.0);
    EXPECT_THROW((void)quasi_integral_margin(RealFunction("x", kUnit), PhiMap::identity(kUnit), 0.7, 0.2),
                 DomainError);
    EXPECT_THROW((void)quasi_integral_margin(RealFunction("1/(x-0.5)", kUnit), PhiMap::identity(kUnit), 0.0, 1.0),
                 EvalError);
}

TEST(QuasiIntegralProperty, MonotoneMeanBelowEndpointMax) {
    Rng rng(44);
    for (const char* f : {"x^3", "exp(x)", "sqrt(x)", "-x", "log(x+1)", "1/(x+1)"}) {
        for (int i = 0; i < 30; ++i) {
            double x = unit_uniform(rng), y = unit_uniform(rng);
            if (x > y) std::swap(x, y);
            if (y - x < 1e-6) continue;
            const auto r = quasi_integral_margin(RealFunction(f, kUnit), PhiMap::identity(kUnit), x, y);
            EXPECT_GE(r.margin, -r.quadrature.error_estimate / (y - x) - 1e-15) << f;
        }
    }
}

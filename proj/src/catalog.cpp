#include "phiconvex/catalog.hpp"

namespace phiconvex {

RealFunction CatalogEntry::function() const {
    return RealFunction(f, interval, convexity_class().codomain());
}

PhiMap CatalogEntry::map() const { return PhiMap(RealFunction(phi, interval)); }

ConvexityClass CatalogEntry::convexity_class() const {
    return ConvexityClass::from_name(class_name, s);
}

namespace {

constexpr Interval kUnit{0.0, 1.0};
constexpr Interval kSymmetric{-1.0, 1.0};
const char* const kAffine = "phi affine";
const char* const kConvexIncreasing = "phi convex, f increasing";
const char* const kBump10 = "exp(-10*(x-0.5)^2)";
const char* const kBump50 = "exp(-50*(x-0.5)^2)";

}  // namespace

const std::vector<CatalogEntry>& membership_catalog() {
    static const std::vector<CatalogEntry> entries{
        {"square-convex", "x^2", "x", kUnit, "phi-convex", 0.5, true, kAffine},
        {"exp-square-map-convex", "exp(x)", "x^2", kUnit, "phi-convex", 0.5, true, kConvexIncreasing},
        {"square-s-convex", "x^2", "0.5*x+0.25", kUnit, "phi-s-convex", 0.5, true, kAffine},
        {"exp-square-map-s-convex", "exp(x)", "x^2", kUnit, "phi-s-convex", 0.5, true, kConvexIncreasing},
        {"linear-godunova-levin", "x", "0.5*x+0.25", kUnit, "phi-godunova-levin", 0.5, true, kAffine},
        {"sqrt-square-map-godunova-levin", "sqrt(x)", "x^2", kUnit, "phi-godunova-levin", 0.5, true,
         kConvexIncreasing},
        {"constant-p", "1", "x^2", kUnit, "phi-p", 0.5, true, kConvexIncreasing},
        {"shifted-linear-p", "x+1", "0.5*x+0.25", kUnit, "phi-p", 0.5, true, kAffine},
        {"exp-log-convex", "exp(x)", "x", kUnit, "log-phi-convex", 0.5, true, kAffine},
        {"gaussian-square-map-log-convex", "exp(x^2)", "x^2", kUnit, "log-phi-convex", 0.5, true,
         kConvexIncreasing},
        {"reciprocal-log-convex", "1/(x+1)", "0.5*x+0.25", kUnit, "log-phi-convex", 0.5, true, kAffine},
        {"sqrt-quasi-convex", "sqrt(x)", "x", kUnit, "phi-quasi-convex", 0.5, true, kAffine},
        {"square-symmetric-quasi-convex", "x^2", "x", kSymmetric, "phi-quasi-convex", 0.5, true, kAffine},
        {"shifted-linear-square-map-quasi-convex", "x+1", "x^2", kUnit, "phi-quasi-convex", 0.5, true,
         kConvexIncreasing},

        {"sqrt-not-convex", "sqrt(x)", "x", kUnit, "phi-convex", 0.5, false, kAffine},
        {"sqrt-square-map-not-convex", "sqrt(x)", "x^2", kUnit, "phi-convex", 0.5, false,
         kConvexIncreasing},
        {"bump-not-s-convex", kBump10, "x", kUnit, "phi-s-convex", 0.5, false, kAffine},
        {"narrow-bump-not-godunova-levin", kBump50, "x", kUnit, "phi-godunova-levin", 0.5, false, kAffine},
        {"narrow-bump-not-p", kBump50, "0.5*x+0.25", kUnit, "phi-p", 0.5, false, kAffine},
        {"shifted-linear-not-log-convex", "x+1", "x", kUnit, "log-phi-convex", 0.5, false, kAffine},
        {"bump-not-quasi-convex", kBump10, "x", kUnit, "phi-quasi-convex", 0.5, false, kAffine},
    };
    return entries;
}

const std::vector<CompositionCase>& composition_catalog() {
    static const std::vector<CompositionCase> cases{
        {TheoremId::T2_1, "x^2", "0.5*x+0.25", kUnit, 0.5, "i"},
        {TheoremId::T2_1, "exp(x)", "x^2", kUnit, 0.5, "ii"},
        {TheoremId::T2_4, "x", "0.5*x+0.25", kUnit, 0.5, "i"},
        {TheoremId::T2_4, "sqrt(x)", "x^2", kUnit, 0.5, "ii"},
        {TheoremId::T2_7, "x+1", "0.5*x+0.25", kUnit, 0.5, "i"},
        {TheoremId::T2_7, "1", "x^2", kUnit, 0.5, "ii"},
        {TheoremId::T2_12, "exp(x)", "0.5*x+0.2", kUnit, 0.5, "i"},
        {TheoremId::T2_12, "exp(x)", "x^2", kUnit, 0.5, "ii"},
        {TheoremId::T2_15, "sqrt(x)", "0.5*x+0.25", kUnit, 0.5, "i"},
        {TheoremId::T2_15, "x+1", "x^2", kUnit, 0.5, "ii"},
    };
    return cases;
}

}  // namespace phiconvex

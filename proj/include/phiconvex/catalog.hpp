#pragma once

#include <string>
#include <vector>

#include "phiconvex/verifier.hpp"

namespace phiconvex {

/// A built-in (f, φ, class) triple with its known membership status.
struct CatalogEntry {
    std::string name;
    std::string f;
    std::string phi;
    Interval interval;
    std::string class_name;
    double s = 0.5;
    bool member = true;
    std::string setting;  // "phi affine", "phi convex, f increasing", ...

    RealFunction function() const;
    PhiMap map() const;
    ConvexityClass convexity_class() const;
};

/// A pair satisfying one branch of a composition theorem's hypotheses.
struct CompositionCase {
    TheoremId theorem;
    std::string f;
    std::string phi;
    Interval interval;
    double s = 0.5;
    std::string branch;  // "i" or "ii"
};

const std::vector<CatalogEntry>& membership_catalog();
const std::vector<CompositionCase>& composition_catalog();

}  // namespace phiconvex

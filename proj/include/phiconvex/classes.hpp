#pragma once

#include <string>
#include <string_view>

#include "phiconvex/function.hpp"

namespace phiconvex {

/// Search keeps φ_h t-values inside [kDeltaT, 1 - kDeltaT]; h(t) = 1/t blows up at the ends.
inline constexpr double kDeltaT = 1e-6;

/// Modulator h of the φ_h-convex family.
struct HSpec {
    enum class Kind { Identity, Power, Reciprocal, One };

    Kind kind = Kind::Identity;
    double s = 1.0;  // Power exponent, in (0, 1]

    static HSpec identity() { return {Kind::Identity, 1.0}; }
    static HSpec power(double s);
    static HSpec reciprocal() { return {Kind::Reciprocal, 1.0}; }
    static HSpec one() { return {Kind::One, 1.0}; }
};

/// h(t) for t in the open unit interval; throws DomainError otherwise.
double h_value(const HSpec& h, double t);

class ConvexityClass {
public:
    enum class Kind { PhiH, LogPhi, QuasiPhi };

    static ConvexityClass phi_h(HSpec h) { return ConvexityClass(Kind::PhiH, h); }
    static ConvexityClass log_phi() { return ConvexityClass(Kind::LogPhi, HSpec::identity()); }
    static ConvexityClass quasi_phi() { return ConvexityClass(Kind::QuasiPhi, HSpec::identity()); }

    /// Accepts "phi-convex", "phi-s-convex" (uses s), "phi-godunova-levin", "phi-p",
    /// "log-phi-convex", "phi-quasi-convex".
    static ConvexityClass from_name(std::string_view name, double s = 0.5);

    Kind kind() const noexcept { return kind_; }
    const HSpec& h() const noexcept { return h_; }

    std::string name() const;
    bool open_t_domain() const noexcept { return kind_ == Kind::PhiH; }
    /// t range explored by counterexample search.
    Interval search_t_range() const noexcept;
    Codomain codomain() const noexcept;

private:
    ConvexityClass(Kind kind, HSpec h) : kind_(kind), h_(h) {}
    Kind kind_;
    HSpec h_;
};

/// Defining inequality evaluated at one (x, y, t). margin = rhs - lhs; for log-φ-convex
/// margin is the log-scale difference t·log f(φx) + (1-t)·log f(φy) - log lhs.
struct DefectPoint {
    double x = 0.0;
    double y = 0.0;
    double t = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
};

DefectPoint defect(const ConvexityClass& cls, const RealFunction& f, const PhiMap& phi,
                   double x, double y, double t);

}  // namespace phiconvex

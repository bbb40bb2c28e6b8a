#include "phiconvex/classes.hpp"

#include <algorithm>
#include <cmath>

#include "phiconvex/error.hpp"

namespace phiconvex {

HSpec HSpec::power(double s) {
    if (!(s > 0.0 && s <= 1.0)) throw DomainError("power exponent s must lie in (0, 1]");
    return {Kind::Power, s};
}

double h_value(const HSpec& h, double t) {
    if (!(t > 0.0 && t < 1.0)) throw DomainError("h(t) is defined only for t in (0, 1)");
    switch (h.kind) {
    case HSpec::Kind::Identity: return t;
    case HSpec::Kind::Power: return std::pow(t, h.s);
    case HSpec::Kind::Reciprocal: return 1.0 / t;
    case HSpec::Kind::One: return 1.0;
    }
    return 0.0;
}

ConvexityClass ConvexityClass::from_name(std::string_view name, double s) {
    if (name == "phi-convex") return phi_h(HSpec::identity());
    if (name == "phi-s-convex") return phi_h(HSpec::power(s));
    if (name == "phi-godunova-levin") return phi_h(HSpec::reciprocal());
    if (name == "phi-p") return phi_h(HSpec::one());
    if (name == "log-phi-convex") return log_phi();
    if (name == "phi-quasi-convex") return quasi_phi();
    throw DomainError("unknown convexity class '" + std::string(name) + "'");
}

std::string ConvexityClass::name() const {
    switch (kind_) {
    case Kind::LogPhi: return "log-phi-convex";
    case Kind::QuasiPhi: return "phi-quasi-convex";
    case Kind::PhiH: break;
    }
    switch (h_.kind) {
    case HSpec::Kind::Identity: return "phi-convex";
    case HSpec::Kind::Power: return "phi-s-convex";
    case HSpec::Kind::Reciprocal: return "phi-godunova-levin";
    case HSpec::Kind::One: return "phi-p";
    }
    return "?";
}

Interval ConvexityClass::search_t_range() const noexcept {
    if (open_t_domain()) return {kDeltaT, 1.0 - kDeltaT};
    return {0.0, 1.0};
}

Codomain ConvexityClass::codomain() const noexcept {
    // Quasi-convexity only compares values, so zeros are harmless; log needs positivity.
    return kind_ == Kind::LogPhi ? Codomain::StrictlyPositive : Codomain::Nonnegative;
}

namespace {

double checked_value(const ConvexityClass& cls, const RealFunction& f, double u) {
    const double v = f(u);
    if (!satisfies(cls.codomain(), v)) {
        throw CodomainError(cls.name() + " requires f " + std::string(to_string(cls.codomain())) +
                            ", but f(" + std::to_string(u) + ") = " + std::to_string(v));
    }
    return v;
}

}  // namespace

DefectPoint defect(const ConvexityClass& cls, const RealFunction& f, const PhiMap& phi,
                   double x, double y, double t) {
    const bool t_ok = cls.open_t_domain() ? (t > 0.0 && t < 1.0) : (t >= 0.0 && t <= 1.0);
    if (!t_ok) throw DomainError("t = " + std::to_string(t) + " outside the t-domain of " + cls.name());

    const double px = phi(x);
    const double py = phi(y);
    // The mixture lies between px and py; clamp away rounding past either end.
    const double mix = std::clamp(t * px + (1.0 - t) * py, std::min(px, py), std::max(px, py));
    const double fx = checked_value(cls, f, px);
    const double fy = checked_value(cls, f, py);

    DefectPoint d{x, y, t, checked_value(cls, f, mix), 0.0, 0.0};
    switch (cls.kind()) {
    case ConvexityClass::Kind::PhiH:
        d.rhs = h_value(cls.h(), t) * fx + h_value(cls.h(), 1.0 - t) * fy;
        d.margin = d.rhs - d.lhs;
        break;
    case ConvexityClass::Kind::QuasiPhi:
        d.rhs = std::max(fx, fy);
        d.margin = d.rhs - d.lhs;
        break;
    case ConvexityClass::Kind::LogPhi: {
        const double log_rhs = t * std::log(fx) + (1.0 - t) * std::log(fy);
        d.rhs = std::exp(log_rhs);
        d.margin = log_rhs - std::log(d.lhs);
        break;
    }
    }
    return d;
}

}  // namespace phiconvex

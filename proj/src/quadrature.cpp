#include "phiconvex/quadrature.hpp"

#include <cmath>

#include "phiconvex/error.hpp"

namespace phiconvex {

namespace {

// Panels are always split this many times before the error test is trusted; a single
// five-point comparison can be fooled by integrands that alias the sample pattern.
constexpr int kMinDepth = 3;

class Simpson {
public:
    Simpson(const std::function<double(double)>& g, int max_depth)
        : g_(g), max_depth_(max_depth) {}

    double sample(double x) {
        const double v = g_(x);
        ++result.evaluations;
        if (!std::isfinite(v)) throw EvalError("non-finite integrand", "quadrature", x);
        return v;
    }

    void refine(double a, double fa, double m, double fm, double b, double fb, double whole,
                double tol, int depth) {
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = sample(lm);
        const double frm = sample(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double diff = left + right - whole;

        if (depth >= kMinDepth && std::fabs(diff) <= 15.0 * tol) {
            result.value += left + right + diff / 15.0;
            result.error_estimate += std::fabs(diff) / 15.0;
            return;
        }
        if (depth >= max_depth_ || m <= a || b <= m) {
            result.value += left + right + diff / 15.0;
            result.error_estimate += std::fabs(diff) / 15.0;
            result.tolerance_met = false;
            return;
        }
        refine(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1);
        refine(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1);
    }

    QuadratureResult result;

private:
    const std::function<double(double)>& g_;
    int max_depth_;
};

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& g, double lo, double hi,
                           double tol, int max_depth) {
    if (!(lo < hi)) throw DomainError("integration requires lo < hi");
    if (!(tol > 0.0)) throw DomainError("integration tolerance must be positive");

    Simpson s(g, max_depth);
    const double m = 0.5 * (lo + hi);
    const double flo = s.sample(lo);
    const double fm = s.sample(m);
    const double fhi = s.sample(hi);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
    s.refine(lo, flo, m, fm, hi, fhi, whole, tol, 1);
    return s.result;
}

}  // namespace phiconvex

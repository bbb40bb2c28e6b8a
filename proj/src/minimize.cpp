#include "phiconvex/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>
#include <vector>

#include "phiconvex/error.hpp"
#include "phiconvex/random.hpp"

namespace phiconvex {

void SearchBudget::validate() const {
    if (grid_per_axis < 1 || restarts < 1 || max_iterations < 1) {
        throw DomainError("search budget counts must all be >= 1");
    }
    if (!(tol_margin > 0.0)) throw DomainError("tol_margin must be positive");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;
constexpr double kDiameterTol = 1e-10;

struct Sample {
    Point3 p;
    double v;
};

bool better(const Sample& a, const Sample& b) {
    if (a.v != b.v) return a.v < b.v;
    return a.p < b.p;
}

class Evaluator {
public:
    Evaluator(const Objective3& f, const Box3& box) : f_(f), box_(box) {}

    Point3 clamp(Point3 p) const {
        for (int i = 0; i < 3; ++i) p[i] = std::clamp(p[i], box_[i].lo, box_[i].hi);
        return p;
    }

    // Safe to call concurrently; counters are kept by the caller.
    double raw(const Point3& p, bool& failed) const {
        failed = false;
        try {
            const double v = f_(p);
            if (std::isfinite(v)) return v;
        } catch (const Error&) {
        }
        failed = true;
        return kInf;
    }

    Sample operator()(const Point3& q) {
        const Point3 p = clamp(q);
        bool failed = false;
        const double v = raw(p, failed);
        ++evaluations;
        if (failed) ++failures;
        return {p, v};
    }

    std::size_t evaluations = 0;
    std::size_t failures = 0;

private:
    const Objective3& f_;
    const Box3& box_;
};

Sample nelder_mead(Evaluator& eval, const Point3& start, const Point3& steps,
                   std::size_t max_iterations) {
    std::array<Sample, 4> simplex;
    simplex[0] = eval(start);
    for (int i = 0; i < 3; ++i) {
        Point3 p = start;
        p[i] += steps[i];
        simplex[i + 1] = eval(p);
    }

    auto blend = [](const Point3& from, const Point3& to, double coef) {
        Point3 r;
        for (int i = 0; i < 3; ++i) r[i] = from[i] + coef * (to[i] - from[i]);
        return r;
    };

    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
        std::sort(simplex.begin(), simplex.end(), better);

        double diameter = 0.0;
        for (int k = 1; k < 4; ++k)
            for (int i = 0; i < 3; ++i)
                diameter = std::max(diameter, std::fabs(simplex[k].p[i] - simplex[0].p[i]));
        if (diameter < kDiameterTol) break;

        Point3 centroid{};
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i) centroid[i] += simplex[k].p[i] / 3.0;

        Sample& worst = simplex[3];
        const Sample reflected = eval(blend(centroid, worst.p, -kReflect));
        if (better(reflected, simplex[0])) {
            const Sample expanded = eval(blend(centroid, worst.p, -kExpand));
            worst = better(expanded, reflected) ? expanded : reflected;
        } else if (better(reflected, simplex[2])) {
            worst = reflected;
        } else {
            const bool outside = better(reflected, worst);
            const Sample contracted =
                eval(blend(centroid, outside ? reflected.p : worst.p, kContract));
            if (better(contracted, outside ? reflected : worst)) {
                worst = contracted;
            } else {
                for (int k = 1; k < 4; ++k)
                    simplex[k] = eval(blend(simplex[0].p, simplex[k].p, kShrink));
            }
        }
    }
    return *std::min_element(simplex.begin(), simplex.end(), better);
}

}  // namespace

MinimizeResult minimize(const Objective3& objective, const Box3& box, const SearchBudget& budget,
                        unsigned threads) {
    budget.validate();
    for (const auto& iv : box) {
        if (!(iv.lo <= iv.hi)) throw DomainError("search box must be nonempty");
    }

    const std::size_t n = budget.grid_per_axis;
    std::array<std::vector<double>, 3> axes;
    for (int i = 0; i < 3; ++i) {
        axes[i] = box[i].lo == box[i].hi ? std::vector<double>(n, box[i].lo)
                                         : uniform_grid(box[i], n);
    }

    // Grid phase: index order is lexicographic point order.
    const std::size_t total = n * n * n;
    std::vector<Sample> grid(total);
    std::vector<unsigned char> failed(total, 0);
    Evaluator eval(objective, box);
    auto scan = [&](std::size_t begin, std::size_t end) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            const Point3 p{axes[0][idx / (n * n)], axes[1][(idx / n) % n], axes[2][idx % n]};
            bool f = false;
            grid[idx] = {p, eval.raw(p, f)};
            failed[idx] = f;
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, 64));
    if (workers == 1) {
        scan(0, total);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (total + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = std::min(total, w * chunk);
            const std::size_t end = std::min(total, begin + chunk);
            pool.emplace_back(scan, begin, end);
        }
    }

    MinimizeResult result;
    result.grid_points = total;
    result.grid_failures = static_cast<std::size_t>(std::count(failed.begin(), failed.end(), 1));

    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), 0);
    const std::size_t keep = std::min(budget.restarts, total);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                      [&](std::size_t a, std::size_t b) { return better(grid[a], grid[b]); });

    Sample best = grid[order[0]];
    result.grid_point = best.p;
    result.grid_value = best.v;

    Point3 spacing;
    for (int i = 0; i < 3; ++i) {
        spacing[i] = n > 1 ? box[i].width() / static_cast<double>(n - 1) : 0.5 * box[i].width();
    }

    Rng rng(budget.seed);
    for (std::size_t r = 0; r < keep; ++r) {
        const Sample& start = grid[order[r]];
        if (!std::isfinite(start.v)) break;
        Point3 steps;
        for (int i = 0; i < 3; ++i) {
            const double len = spacing[i] * (0.5 + 0.5 * unit_uniform(rng));
            const bool down = (rng() & 1u) != 0;
            // Step into the box when the start sits on a face.
            double s = down ? -len : len;
            if (start.p[i] + s > box[i].hi || start.p[i] + s < box[i].lo) s = -s;
            steps[i] = s;
        }
        const Sample found = nelder_mead(eval, start.p, steps, budget.max_iterations);
        if (better(found, best)) best = found;
    }

    result.point = best.p;
    result.value = best.v;
    result.evaluations = total + eval.evaluations;
    result.failures = result.grid_failures + eval.failures;
    return result;
}

}  // namespace phiconvex

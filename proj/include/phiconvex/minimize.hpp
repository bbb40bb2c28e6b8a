#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>

#include "phiconvex/function.hpp"

namespace phiconvex {

inline constexpr std::uint64_t kDefaultSeed = 20240917;

struct SearchBudget {
    std::size_t grid_per_axis = 41;
    std::size_t restarts = 8;
    std::size_t max_iterations = 400;  // Nelder-Mead iterations per restart
    std::uint64_t seed = kDefaultSeed;
    double tol_margin = 1e-9;

    /// Throws DomainError unless every count is >= 1 and tol_margin > 0.
    void validate() const;
};

using Point3 = std::array<double, 3>;
using Box3 = std::array<Interval, 3>;

/// Objective over a box. May throw phiconvex::Error or return non-finite values; both
/// count as evaluation failures and score +inf. Must tolerate concurrent calls when
/// minimize runs with more than one thread.
using Objective3 = std::function<double(const Point3&)>;

struct MinimizeResult {
    Point3 point{};
    double value = 0.0;
    Point3 grid_point{};
    double grid_value = 0.0;
    std::size_t evaluations = 0;
    std::size_t failures = 0;
    std::size_t grid_points = 0;
    std::size_t grid_failures = 0;
};

/// Coarse scan of grid_per_axis^3 points, then Nelder-Mead (reflection 1, expansion 2,
/// contraction 0.5, shrink 0.5) from the `restarts` best grid points, clamped to the box.
/// Ties are broken by lexicographic point order, so results depend only on the budget.
MinimizeResult minimize(const Objective3& objective, const Box3& box, const SearchBudget& budget,
                        unsigned threads = 1);

}  // namespace phiconvex

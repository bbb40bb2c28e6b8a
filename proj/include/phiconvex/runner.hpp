#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "phiconvex/minimize.hpp"
#include "phiconvex/quadrature.hpp"
#include "phiconvex/verifier.hpp"

namespace phiconvex {

inline constexpr std::string_view kToolkitName = "phiconvex";
inline constexpr std::string_view kToolkitVersion = "0.1.0";
inline constexpr std::size_t kDefaultJensenInstances = 100;

enum class TaskKind { Falsify, Theorem, Jensen, Integral };

/// One fully resolved task of an analysis spec.
struct TaskSpec {
    TaskKind kind = TaskKind::Falsify;
    std::string f;
    std::string phi = "x";
    Interval interval{0.0, 1.0};
    std::optional<std::string> class_name;
    double s = 0.5;
    std::optional<TheoremId> theorem;
    std::vector<double> weights;
    std::vector<double> points;
    SearchBudget budget;
    double quad_tol = kDefaultQuadTol;
    std::size_t jensen_instances = kDefaultJensenInstances;

    nlohmann::json to_json() const;
};

struct AnalysisSpec {
    std::uint64_t seed = kDefaultSeed;
    std::vector<TaskSpec> tasks;

    /// Normalised echo; parsing it again yields the same tasks.
    nlohmann::json to_json() const;
};

/// Seed used when neither the spec nor the command line sets one: PHICONVEX_SEED if it
/// holds an unsigned integer, else kDefaultSeed.
std::uint64_t default_seed();

/// Validates every field (expressions parse, names resolve, budgets are sane) before
/// anything is computed. Throws phiconvex::Error with a description of the bad field.
/// `seed_override` takes precedence over the spec's own "seed".
AnalysisSpec parse_spec(const nlohmann::json& doc, std::optional<std::uint64_t> seed_override = {});

/// Reads and parses a spec file; JSON syntax errors report line and column.
AnalysisSpec load_spec(const std::filesystem::path& path,
                       std::optional<std::uint64_t> seed_override = {});

struct RunOptions {
    bool parallel = false;  // run independent tasks concurrently
};

struct RunResult {
    nlohmann::json report;
    int exit_code = 0;  // 0 consistent, 2 discrepancy with a theorem's prediction, 1 error
    std::string summary;
};

RunResult run_analysis(const AnalysisSpec& spec, const RunOptions& options = {});

/// Copy of a report without wall-clock fields ("seconds", "wall_time_seconds").
nlohmann::json strip_timing(nlohmann::json report);

}  // namespace phiconvex

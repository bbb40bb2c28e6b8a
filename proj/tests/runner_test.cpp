#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "phiconvex/catalog.hpp"
#include "phiconvex/error.hpp"
#include "phiconvex/runner.hpp"

using namespace phiconvex;
using nlohmann::json;

namespace {

json base_task() {
    return {{"f", "x^2"}, {"phi", "x"}, {"interval", {0, 1}}, {"class", "phi-convex"}, {"task", "falsify"},
            {"budget", {{"grid_per_axis", 11}, {"restarts", 2}}}};
}

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << text;
    return path;
}

}  // namespace

TEST(ParseSpec, DefaultsAreFilledIn) {
    json doc = base_task();
    doc.erase("budget");
    const auto spec = parse_spec(doc, 99);
    ASSERT_EQ(spec.tasks.size(), 1u);
    const auto& t = spec.tasks[0];
    EXPECT_EQ(t.kind, TaskKind::Falsify);
    EXPECT_EQ(t.budget.grid_per_axis, 41u);
    EXPECT_EQ(t.budget.restarts, 8u);
    EXPECT_EQ(t.budget.tol_margin, 1e-9);
    EXPECT_EQ(t.budget.seed, 99u);
    EXPECT_EQ(t.quad_tol, 1e-9);
}

TEST(ParseSpec, SeedPrecedence) {
    json doc = base_task();
    ::setenv("PHICONVEX_SEED", "4242", 1);
    EXPECT_EQ(parse_spec(doc).seed, 4242u);
    doc["seed"] = 5;
    EXPECT_EQ(parse_spec(doc).seed, 5u);
    EXPECT_EQ(parse_spec(doc, 6).seed, 6u);
    ::unsetenv("PHICONVEX_SEED");
    doc.erase("seed");
    EXPECT_EQ(parse_spec(doc).seed, kDefaultSeed);
}

TEST(ParseSpec, TasksInheritSharedFields) {
    const json doc{{"interval", {0, 1}},
                   {"f", "exp(x)"},
                   {"tasks",
                    {{{"task", "thm-2.13"}},
                     {{"task", "theorem"}, {"theorem", "thm-2.12"}, {"phi", "0.5*x+0.2"}},
                     {{"task", "jensen"}, {"class", "phi-quasi-convex"}, {"seed", 3}},
                     {{"task", "integral"}, {"class", "log-phi-convex"}, {"points", {0.2, 0.8}}}}}};
    const auto spec = parse_spec(doc, 1);
    ASSERT_EQ(spec.tasks.size(), 4u);
    EXPECT_EQ(spec.tasks[0].theorem, TheoremId::T2_13);
    EXPECT_EQ(spec.tasks[1].phi, "0.5*x+0.2");
    EXPECT_EQ(spec.tasks[2].theorem, TheoremId::T2_17);
    EXPECT_EQ(spec.tasks[2].budget.seed, 3u);
    EXPECT_EQ(spec.tasks[3].theorem, TheoremId::T2_13);
    EXPECT_EQ(spec.tasks[3].f, "exp(x)");
}

TEST(ParseSpec, RejectsBadFields) {
    auto with = [](const char* key, json value) {
        json doc = base_task();
        doc[key] = std::move(value);
        return doc;
    };
    EXPECT_THROW((void)parse_spec(with("colour", "red")), Error);
    EXPECT_THROW((void)parse_spec(with("f", "sqrt(")), Error);
    EXPECT_THROW((void)parse_spec(with("interval", {1, 0})), Error);
    EXPECT_THROW((void)parse_spec(with("class", "convex")), Error);
    EXPECT_THROW((void)parse_spec(with("task", "prove")), Error);
    EXPECT_THROW((void)parse_spec(with("budget", {{"restarts", 0}})), Error);
    EXPECT_THROW((void)parse_spec(with("budget", {{"speed", 1}})), Error);
    EXPECT_THROW((void)parse_spec(with("seed", -1)), Error);

    json thm = base_task();
    thm["task"] = "thm-2.13";  // premise class is log-phi-convex, not phi-convex
    EXPECT_THROW((void)parse_spec(thm), Error);

    json jensen = base_task();
    jensen["task"] = "jensen";
    jensen["class"] = "phi-p";
    jensen["weights"] = {0.5, 0.6};
    jensen["points"] = {0.1, 0.2};
    EXPECT_THROW((void)parse_spec(jensen), Error);

    json no_class = base_task();
    no_class.erase("class");
    EXPECT_THROW((void)parse_spec(no_class), Error);
}

TEST(LoadSpec, ReportsLineAndColumn) {
    const auto path = write_temp("phiconvex_bad.json", "{\n  \"f\": \"x\",\n  \"phi\" \"x\"\n}\n");
    try {
        (void)load_spec(path);
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find(":3:11:"), std::string::npos) << e.what();
    }
    EXPECT_THROW((void)load_spec("/nonexistent/spec.json"), Error);
}

TEST(RunAnalysis, ExitCodeConsistent) {
    const auto r = run_analysis(parse_spec(base_task(), 1));
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.report["tasks"][0]["result"]["verdict"], "no counterexample found");
    EXPECT_NE(r.summary.find("no counterexample found"), std::string::npos);
}

TEST(RunAnalysis, FalsificationWithoutPredictionIsExitZero) {
    json doc = base_task();
    doc["f"] = "sqrt(x)";
    const auto r = run_analysis(parse_spec(doc, 1));
    EXPECT_EQ(r.exit_code, 0);
    const auto& res = r.report["tasks"][0]["result"];
    EXPECT_TRUE(res["falsified"].get<bool>());
    EXPECT_TRUE(res["witness_revalidated"].get<bool>());
}

TEST(RunAnalysis, EvaluationErrorIsExitOne) {
    json doc = base_task();
    doc["f"] = "x - 0.5";  // negative values violate the φ_h codomain
    const auto r = run_analysis(parse_spec(doc, 1));
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_EQ(r.report["tasks"][0]["result"]["status"], "error");
}

TEST(RunAnalysis, DiscrepancyIsExitTwo) {
    // The premise search is starved so it misses the narrow spike, which the Jensen
    // instance then lands on.
    const json doc{{"f", "x + max(0, 0.001 - 10*abs(x - 0.31234))"},
                   {"interval", {0, 1}},
                   {"task", "thm-2.17"},
                   {"weights", {0.5, 0.5}},
                   {"points", {0.31229, 0.31239}},
                   {"budget", {{"grid_per_axis", 3}, {"restarts", 1}, {"max_iterations", 1}}}};
    const auto r = run_analysis(parse_spec(doc, 7));
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_EQ(r.report["tasks"][0]["result"]["status"], "discrepancy");

    // A wide bump is caught by the premise search, so the check is vacuous.
    json wide = doc;
    wide["f"] = "x + max(0, 0.2 - 2*abs(x - 0.5))";
    wide["points"] = {0.4, 0.6};
    wide.erase("budget");
    const auto v = run_analysis(parse_spec(wide, 7));
    EXPECT_EQ(v.exit_code, 0);
    EXPECT_EQ(v.report["tasks"][0]["result"]["status"], "vacuous");
}

TEST(RunAnalysis, IntegralEqualityCase) {
    const json doc{{"f", "exp(x)"}, {"phi", "x"}, {"interval", {0, 1}}, {"task", "thm-2.13"},
                   {"budget", {{"grid_per_axis", 11}}}};
    const auto r = run_analysis(parse_spec(doc, 1));
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NEAR(r.report["tasks"][0]["result"]["margin"].get<double>(), 0.0, 1e-9);
}

TEST(RunAnalysis, DeterministicAndSelfContained) {
    const json doc{{"interval", {0, 1}},
                   {"budget", {{"grid_per_axis", 9}, {"restarts", 2}, {"jensen_instances", 20}}},
                   {"tasks",
                    {{{"f", "sqrt(x)"}, {"class", "phi-convex"}, {"task", "falsify"}},
                     {{"f", "x+1"}, {"phi", "x^2"}, {"task", "thm-2.15"}},
                     {{"f", "x"}, {"phi", "0.5*x+0.25"}, {"task", "thm-2.6"}},
                     {{"f", "x^2"}, {"task", "thm-2.16"}}}}};
    const auto spec = parse_spec(doc, 2024);
    const auto a = run_analysis(spec);
    const auto b = run_analysis(spec, {true});
    EXPECT_EQ(strip_timing(a.report).dump(), strip_timing(b.report).dump());

    // Re-running the echoed spec reproduces the same results.
    const auto echo = run_analysis(parse_spec(a.report["spec"]));
    EXPECT_EQ(strip_timing(echo.report).dump(), strip_timing(a.report).dump());

    // A different seed changes the random Jensen instances.
    const auto c = run_analysis(parse_spec(doc, 2025));
    EXPECT_NE(strip_timing(c.report)["tasks"][2].dump(), strip_timing(a.report)["tasks"][2].dump());
}

TEST(Catalog, CoversEveryClassBothWays) {
    const auto& cat = membership_catalog();
    std::size_t members = 0, non_members = 0;
    std::set<std::string> member_classes, settings;
    for (const auto& e : cat) {
        if (e.member) {
            ++members;
            member_classes.insert(e.class_name);
            settings.insert(e.setting);
        } else {
            ++non_members;
        }
    }
    EXPECT_GE(members, 12u);
    EXPECT_GE(non_members, 6u);
    EXPECT_EQ(member_classes.size(), 6u);
    EXPECT_EQ(settings.size(), 2u);

    auto has = [&](const char* f, const char* phi, const char* cls, bool member) {
        return std::any_of(cat.begin(), cat.end(), [&](const CatalogEntry& e) {
            return e.f == f && e.phi == phi && e.class_name == cls && e.member == member;
        });
    };
    EXPECT_TRUE(has("exp(x)", "x", "log-phi-convex", true));
    EXPECT_TRUE(has("sqrt(x)", "x", "phi-convex", false));
    EXPECT_TRUE(has("1", "x^2", "phi-p", true));
}

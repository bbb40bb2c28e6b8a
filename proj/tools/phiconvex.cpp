#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "phiconvex/catalog.hpp"
#include "phiconvex/error.hpp"
#include "phiconvex/expr.hpp"
#include "phiconvex/runner.hpp"
#include "phiconvex/theorems.hpp"

namespace {

int run_command(const std::string& spec_path, const std::string& out_path,
                std::optional<std::uint64_t> seed, bool parallel) {
    const phiconvex::AnalysisSpec spec = phiconvex::load_spec(spec_path, seed);
    const phiconvex::RunResult result = phiconvex::run_analysis(spec, {parallel});
    std::cout << result.summary;
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw phiconvex::Error("cannot write report to " + out_path);
        out << result.report.dump(2) << '\n';
    }
    std::cout << "exit code " << result.exit_code;
    if (result.exit_code == 0) std::cout << " (consistent; no counterexample found is not a proof)";
    else if (result.exit_code == 2) std::cout << " (falsification where a theorem predicted membership)";
    else std::cout << " (evaluation error)";
    std::cout << '\n';
    return result.exit_code;
}

void print_catalog() {
    std::printf("%-40s %-20s %-12s %-10s %-20s %-5s %-10s %s\n", "name", "f", "phi", "interval",
                "class", "s", "expected", "setting");
    for (const auto& e : phiconvex::membership_catalog()) {
        const std::string iv = "[" + std::to_string(static_cast<int>(e.interval.lo)) + "," +
                               std::to_string(static_cast<int>(e.interval.hi)) + "]";
        std::printf("%-40s %-20s %-12s %-10s %-20s %-5g %-10s %s\n", e.name.c_str(), e.f.c_str(),
                    e.phi.c_str(), iv.c_str(), e.class_name.c_str(), e.s,
                    e.member ? "member" : "non-member", e.setting.c_str());
    }
    std::printf("\n%-10s %-10s %-12s %-10s %-5s %s\n", "theorem", "f", "phi", "interval", "s", "branch");
    for (const auto& c : phiconvex::composition_catalog()) {
        const std::string iv = "[" + std::to_string(static_cast<int>(c.interval.lo)) + "," +
                               std::to_string(static_cast<int>(c.interval.hi)) + "]";
        std::printf("%-10s %-10s %-12s %-10s %-5g %s\n", phiconvex::to_string(c.theorem).c_str(),
                    c.f.c_str(), c.phi.c_str(), iv.c_str(), c.s, c.branch.c_str());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical membership and inequality checks for phi-based convexity classes"};
    app.require_subcommand(1);

    std::string spec_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    bool parallel = false;
    auto* run = app.add_subcommand("run", "Run the tasks of a JSON analysis spec");
    run->add_option("spec", spec_path, "Spec file (JSON)")->required();
    run->add_option("--out", out_path, "Write the JSON report here");
    run->add_option("--seed", seed, "Seed overriding the spec and PHICONVEX_SEED");
    run->add_flag("--parallel", parallel, "Run independent tasks concurrently");

    app.add_subcommand("catalog", "List the built-in catalog of (f, phi, class) triples");

    std::string expr_text;
    double at = 0.0;
    auto* eval = app.add_subcommand("eval", "Evaluate an expression at a point");
    eval->add_option("expr", expr_text, "Expression in x")->required();
    eval->add_option("--at", at, "Point of evaluation")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) return run_command(spec_path, out_path, seed, parallel);
        if (eval->parsed()) {
            const double v = phiconvex::parse(expr_text).eval(at);
            std::cout << nlohmann::json(v).dump() << '\n';
            return 0;
        }
        print_catalog();
        return 0;
    } catch (const phiconvex::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

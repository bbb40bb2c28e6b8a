#include "phiconvex/runner.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <thread>

#include "phiconvex/error.hpp"
#include "phiconvex/theorems.hpp"

namespace phiconvex {

using nlohmann::json;

namespace {

constexpr double kChainTol = 1e-9;

std::string_view to_string(TaskKind k) {
    switch (k) {
    case TaskKind::Falsify: return "falsify";
    case TaskKind::Theorem: return "theorem";
    case TaskKind::Jensen: return "jensen";
    case TaskKind::Integral: return "integral";
    }
    return "?";
}

[[noreturn]] void field_error(std::string_view field, const std::string& what) {
    throw Error("spec field '" + std::string(field) + "': " + what);
}

double number_field(const json& doc, std::string_view key) {
    const json& v = doc.at(std::string(key));
    if (!v.is_number()) field_error(key, "expected a number");
    return v.get<double>();
}

bool is_nonnegative_integer(const json& v) {
    return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

std::size_t count_field(const json& doc, std::string_view key) {
    const json& v = doc.at(std::string(key));
    if (!is_nonnegative_integer(v)) field_error(key, "expected a non-negative integer");
    return v.get<std::size_t>();
}

std::vector<double> numbers_field(const json& doc, std::string_view key) {
    const json& v = doc.at(std::string(key));
    if (!v.is_array()) field_error(key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) field_error(key, "expected an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

std::string string_field(const json& doc, std::string_view key) {
    const json& v = doc.at(std::string(key));
    if (!v.is_string()) field_error(key, "expected a string");
    return v.get<std::string>();
}

void check_expression(std::string_view key, const std::string& text) {
    try {
        (void)parse(text);
    } catch (const ParseError& e) {
        field_error(key, e.what());
    }
}

const std::set<std::string> kTaskKeys{"f",      "phi",    "interval", "class", "s",   "task",
                                      "theorem", "weights", "points",  "budget", "seed"};
const std::set<std::string> kBudgetKeys{"grid_per_axis", "restarts",  "max_iterations",
                                        "tol_margin",    "quad_tol", "jensen_instances"};

TheoremId jensen_theorem_for(const ConvexityClass& cls) {
    if (cls.kind() == ConvexityClass::Kind::QuasiPhi) return TheoremId::T2_17;
    if (cls.kind() == ConvexityClass::Kind::PhiH) {
        switch (cls.h().kind) {
        case HSpec::Kind::Power: return TheoremId::T2_2;
        case HSpec::Kind::Reciprocal: return TheoremId::T2_6;
        case HSpec::Kind::One: return TheoremId::T2_9;
        case HSpec::Kind::Identity: break;
        }
    }
    throw Error("no Jensen-type theorem covers class '" + cls.name() + "'");
}

TaskSpec parse_task(const json& doc, std::uint64_t seed) {
    if (!doc.is_object()) throw Error("each task must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (!kTaskKeys.contains(key)) field_error(key, "unknown key");
    }

    TaskSpec t;
    if (!doc.contains("f")) field_error("f", "missing");
    t.f = string_field(doc, "f");
    check_expression("f", t.f);
    if (doc.contains("phi")) {
        t.phi = string_field(doc, "phi");
        check_expression("phi", t.phi);
    }

    if (!doc.contains("interval")) field_error("interval", "missing");
    const auto iv = numbers_field(doc, "interval");
    if (iv.size() != 2 || !(iv[0] < iv[1])) field_error("interval", "expected [a, b] with a < b");
    t.interval = {iv[0], iv[1]};

    if (doc.contains("s")) t.s = number_field(doc, "s");
    if (doc.contains("class")) {
        t.class_name = string_field(doc, "class");
        try {
            (void)ConvexityClass::from_name(*t.class_name, t.s);
        } catch (const Error& e) {
            field_error("class", e.what());
        }
    }
    if (doc.contains("theorem")) {
        try {
            t.theorem = parse_theorem_id(string_field(doc, "theorem"));
        } catch (const DomainError& e) {
            field_error("theorem", e.what());
        }
    }
    if (doc.contains("weights")) t.weights = numbers_field(doc, "weights");
    if (doc.contains("points")) t.points = numbers_field(doc, "points");

    t.budget.seed = seed;
    if (doc.contains("seed")) {
        if (!is_nonnegative_integer(doc["seed"])) field_error("seed", "expected an unsigned integer");
        t.budget.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("budget")) {
        const json& b = doc["budget"];
        if (!b.is_object()) field_error("budget", "expected an object");
        for (const auto& [key, value] : b.items()) {
            if (!kBudgetKeys.contains(key)) field_error("budget." + key, "unknown key");
        }
        if (b.contains("grid_per_axis")) t.budget.grid_per_axis = count_field(b, "grid_per_axis");
        if (b.contains("restarts")) t.budget.restarts = count_field(b, "restarts");
        if (b.contains("max_iterations")) t.budget.max_iterations = count_field(b, "max_iterations");
        if (b.contains("tol_margin")) t.budget.tol_margin = number_field(b, "tol_margin");
        if (b.contains("quad_tol")) t.quad_tol = number_field(b, "quad_tol");
        if (b.contains("jensen_instances")) t.jensen_instances = count_field(b, "jensen_instances");
    }
    try {
        t.budget.validate();
    } catch (const DomainError& e) {
        field_error("budget", e.what());
    }
    if (!(t.quad_tol > 0.0)) field_error("budget.quad_tol", "must be positive");
    if (t.jensen_instances < 1) field_error("budget.jensen_instances", "must be >= 1");

    if (!doc.contains("task")) field_error("task", "missing");
    const std::string task = string_field(doc, "task");
    if (task == "falsify") {
        t.kind = TaskKind::Falsify;
        if (!t.class_name) field_error("class", "required by task 'falsify'");
    } else if (task == "theorem" || task.starts_with("thm-")) {
        t.kind = TaskKind::Theorem;
        if (task != "theorem") {
            const TheoremId id = parse_theorem_id(task);
            if (t.theorem && *t.theorem != id) field_error("theorem", "disagrees with task");
            t.theorem = id;
        }
        if (!t.theorem) field_error("theorem", "required by task 'theorem'");
    } else if (task == "jensen") {
        t.kind = TaskKind::Jensen;
        if (!t.theorem) {
            if (!t.class_name) field_error("class", "task 'jensen' needs a class or theorem");
            t.theorem = jensen_theorem_for(ConvexityClass::from_name(*t.class_name, t.s));
        }
        if (!is_jensen_theorem(*t.theorem)) field_error("theorem", "not a Jensen-type theorem");
    } else if (task == "integral") {
        t.kind = TaskKind::Integral;
        if (!t.theorem) {
            if (t.class_name == "log-phi-convex") t.theorem = TheoremId::T2_13;
            else if (t.class_name == "phi-quasi-convex") t.theorem = TheoremId::T2_16;
            else field_error("class", "task 'integral' needs log-phi-convex or phi-quasi-convex");
        }
        if (!is_integral_theorem(*t.theorem)) field_error("theorem", "not an integral theorem");
    } else {
        field_error("task", "unknown task '" + task + "'");
    }

    if (t.theorem) {
        const std::string premise = premise_class(*t.theorem, t.s).name();
        if (t.class_name && *t.class_name != premise) {
            field_error("class", "'" + *t.class_name + "' is not the premise class of " +
                                     phiconvex::to_string(*t.theorem) + " (" + premise + ")");
        }
        if (t.theorem == TheoremId::T2_1 || t.theorem == TheoremId::T2_2) {
            try {
                (void)HSpec::power(t.s);
            } catch (const DomainError& e) {
                field_error("s", e.what());
            }
        }
        if (is_jensen_theorem(*t.theorem) && (!t.weights.empty() || !t.points.empty())) {
            try {
                JensenInstance{t.weights, t.points}.validate(t.interval);
            } catch (const DomainError& e) {
                field_error("weights", e.what());
            }
        }
        if (is_integral_theorem(*t.theorem) && !t.points.empty()) {
            if (t.points.size() != 2) field_error("points", "integral checks take two points");
            for (double p : t.points) {
                if (!t.interval.contains(p)) field_error("points", "outside the interval");
            }
            if (t.theorem == TheoremId::T2_16 && !(t.points[0] < t.points[1])) {
                field_error("points", "thm-2.16 requires x < y");
            }
        }
    }
    return t;
}

// ---------------------------------------------------------------------------
// Execution

json witness_json(const DefectPoint& w) {
    return {{"x", w.x}, {"y", w.y}, {"t", w.t}, {"lhs", w.lhs}, {"rhs", w.rhs}, {"margin", w.margin}};
}

DefectPoint witness_from_json(const json& j) {
    return {j.at("x").get<double>(),   j.at("y").get<double>(),   j.at("t").get<double>(),
            j.at("lhs").get<double>(), j.at("rhs").get<double>(), j.at("margin").get<double>()};
}

json verdict_json(const Verdict& v, const ConvexityClass& cls, const RealFunction& f,
                  const PhiMap& phi, double tol) {
    json j{{"verdict", v.label()},
           {"falsified", v.falsified()},
           {"min_margin", v.min_margin_observed},
           {"points_tested", v.points_tested},
           {"eval_failures", v.eval_failures}};
    if (v.witness) {
        j["witness"] = witness_json(*v.witness);
        // Re-check from the serialised text, exactly as a report reader would.
        const DefectPoint back = witness_from_json(json::parse(j["witness"].dump()));
        j["witness_revalidated"] = revalidate(cls, f, phi, back, tol);
    }
    return j;
}

json hypothesis_json(const HypothesisResult& h) {
    return {{"pass", h.pass}, {"worst", h.worst}, {"location", h.location}, {"samples", h.samples}};
}

struct TaskOutcome {
    json body;
    std::string verdict;
    double margin = 0.0;
    bool discrepancy = false;
    bool error = false;
};

struct Context {
    const TaskSpec& task;
    RealFunction f;
    PhiMap phi;
};

Context make_context(const TaskSpec& t, Codomain codomain) {
    return Context{t, RealFunction(t.f, t.interval, codomain),
                   PhiMap(RealFunction(t.phi, t.interval))};
}

TaskOutcome run_falsify(const TaskSpec& t) {
    const ConvexityClass cls = ConvexityClass::from_name(*t.class_name, t.s);
    const Context c = make_context(t, cls.codomain());
    const Verdict v = falsify_membership(c.f, c.phi, cls, t.budget);
    TaskOutcome out;
    out.body = verdict_json(v, cls, c.f, c.phi, t.budget.tol_margin);
    out.body["phi_range"] = hypothesis_json(check_range(c.phi, kHypothesisGrid));
    out.verdict = std::string(v.label());
    out.margin = v.min_margin_observed;
    return out;
}

TaskOutcome with_status(TaskOutcome out, TheoremStatus status) {
    out.body["status"] = to_string(status);
    out.verdict = std::string(to_string(status));
    out.discrepancy = status == TheoremStatus::Discrepancy;
    return out;
}

TaskOutcome run_composition(const TaskSpec& t) {
    const TheoremId id = *t.theorem;
    const Context c = make_context(t, premise_class(id, t.s).codomain());
    const CompositionResult r = check_composition(id, c.f, c.phi, t.budget, t.s);
    const HypothesisReport& h = r.hypotheses;

    TaskOutcome out;
    out.body["premise_class"] = h.premise.name();
    out.body["hypotheses"] = {
        {"premise", verdict_json(h.premise_verdict, h.premise, c.f, c.phi, t.budget.tol_margin)},
        {"phi_range", hypothesis_json(h.range)},
        {"phi_affine", hypothesis_json(h.affine)},
        {"phi_convex", hypothesis_json(h.convex_map)},
        {"f_increasing", hypothesis_json(h.increasing)},
        {"branch_i", h.branch_i()},
        {"branch_ii", h.branch_ii()},
    };
    const RealFunction composite = c.f.compose(c.phi.fn());
    out.body["target_class"] = r.target.name();
    out.body["composite"] = composite.expr().render();
    out.body["conclusion"] = verdict_json(r.verdict, r.target, composite,
                                          PhiMap::identity(t.interval), t.budget.tol_margin);
    out.margin = r.verdict.min_margin_observed;
    return with_status(std::move(out), r.status());
}

TaskOutcome run_jensen(const TaskSpec& t) {
    const TheoremId id = *t.theorem;
    const ConvexityClass cls = premise_class(id, t.s);
    const Context c = make_context(t, cls.codomain());
    const Verdict premise = falsify_membership(c.f, c.phi, cls, t.budget);
    const HypothesisResult range = check_range(c.phi, kHypothesisGrid);

    std::vector<JensenInstance> instances;
    if (!t.weights.empty()) {
        instances.push_back({t.weights, t.points});
    } else {
        Rng rng(t.budget.seed);
        for (std::size_t i = 0; i < t.jensen_instances; ++i) {
            const std::size_t n = 2 + static_cast<std::size_t>(rng() % 5);
            instances.push_back(random_instance(rng, n, t.interval));
        }
    }

    double min_margin = std::numeric_limits<double>::infinity();
    double max_drop = -std::numeric_limits<double>::infinity();
    json worst;
    for (const auto& inst : instances) {
        const JensenResult r = jensen_margin(cls, c.f, c.phi, inst);
        max_drop = std::max(max_drop, r.worst_chain_drop());
        if (r.margin < min_margin) {
            min_margin = r.margin;
            worst = {{"weights", inst.weights}, {"points", inst.points}, {"lhs", r.lhs},
                     {"rhs", r.rhs},            {"margin", r.margin},    {"chain", r.chain}};
        }
    }

    TaskOutcome out;
    out.body["premise_class"] = cls.name();
    out.body["premise"] = verdict_json(premise, cls, c.f, c.phi, t.budget.tol_margin);
    out.body["phi_range"] = hypothesis_json(range);
    out.body["instances"] = instances.size();
    out.body["min_margin"] = min_margin;
    out.body["max_chain_drop"] = max_drop;
    out.body["chain_monotone"] = max_drop <= kChainTol;
    out.body["worst_instance"] = worst;
    out.margin = min_margin;

    TheoremStatus status = TheoremStatus::Vacuous;
    if (range.pass && !premise.falsified()) {
        const bool ok = min_margin >= -t.budget.tol_margin && max_drop <= kChainTol;
        status = ok ? TheoremStatus::Consistent : TheoremStatus::Discrepancy;
    }
    return with_status(std::move(out), status);
}

TaskOutcome run_integral(const TaskSpec& t) {
    const TheoremId id = *t.theorem;
    const ConvexityClass cls = premise_class(id, t.s);
    const Context c = make_context(t, cls.codomain());
    const double lo = t.points.empty() ? t.interval.lo : t.points[0];
    const double hi = t.points.empty() ? t.interval.hi : t.points[1];

    const Verdict premise = falsify_membership(c.f, c.phi, cls, t.budget);
    const HypothesisResult range = check_range(c.phi, kHypothesisGrid);
    const IntegralCheck r = id == TheoremId::T2_13 ? hh_geometric_margin(c.f, c.phi, lo, hi, t.quad_tol)
                                                   : quasi_integral_margin(c.f, c.phi, lo, hi, t.quad_tol);

    TaskOutcome out;
    out.body["premise_class"] = cls.name();
    out.body["premise"] = verdict_json(premise, cls, c.f, c.phi, t.budget.tol_margin);
    out.body["phi_range"] = hypothesis_json(range);
    out.body["endpoints"] = {lo, hi};
    out.body["mean"] = r.mean;
    out.body["bound"] = r.bound;
    out.body["margin"] = r.margin;
    out.body["degenerate"] = r.degenerate;
    out.body["quadrature"] = {{"value", r.quadrature.value},
                              {"error_estimate", r.quadrature.error_estimate},
                              {"evaluations", r.quadrature.evaluations},
                              {"tolerance_met", r.quadrature.tolerance_met}};
    out.margin = r.margin;

    TheoremStatus status = TheoremStatus::Vacuous;
    if (range.pass && !premise.falsified()) {
        const double width = std::fabs(c.phi(hi) - c.phi(lo));
        const double slack = r.degenerate ? 0.0 : r.quadrature.error_estimate / width;
        status = r.margin >= -(t.budget.tol_margin + slack) ? TheoremStatus::Consistent
                                                            : TheoremStatus::Discrepancy;
    }
    return with_status(std::move(out), status);
}

TaskOutcome run_task(const TaskSpec& t) {
    TaskOutcome out;
    try {
        if (t.kind == TaskKind::Falsify) out = run_falsify(t);
        else if (is_composition_theorem(*t.theorem)) out = run_composition(t);
        else if (is_jensen_theorem(*t.theorem)) out = run_jensen(t);
        else out = run_integral(t);
    } catch (const Error& e) {
        out = TaskOutcome{};
        out.error = true;
        out.verdict = "error";
        out.margin = std::numeric_limits<double>::quiet_NaN();
        out.body["error"] = e.what();
        out.body["status"] = "error";
    }
    return out;
}

std::string task_label(const TaskSpec& t, std::size_t index) {
    std::string label = "#" + std::to_string(index + 1) + " " + std::string(to_string(t.kind));
    if (t.theorem) label += " " + phiconvex::to_string(*t.theorem);
    else if (t.class_name) label += " " + *t.class_name;
    return label;
}

std::string format_row(const std::string& task, const std::string& verdict, double margin,
                       double seconds) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-32.32s %-24.24s %15.6e %9.3f\n", task.c_str(), verdict.c_str(),
                  margin, seconds);
    return buf;
}

}  // namespace

json TaskSpec::to_json() const {
    json j{{"task", to_string(kind)},
           {"f", f},
           {"phi", phi},
           {"interval", {interval.lo, interval.hi}},
           {"s", s},
           {"seed", budget.seed},
           {"budget",
            {{"grid_per_axis", budget.grid_per_axis},
             {"restarts", budget.restarts},
             {"max_iterations", budget.max_iterations},
             {"tol_margin", budget.tol_margin},
             {"quad_tol", quad_tol},
             {"jensen_instances", jensen_instances}}}};
    if (class_name) j["class"] = *class_name;
    if (theorem) j["theorem"] = phiconvex::to_string(*theorem);
    if (!weights.empty()) j["weights"] = weights;
    if (!points.empty()) j["points"] = points;
    return j;
}

json AnalysisSpec::to_json() const {
    json tasks_json = json::array();
    for (const auto& t : tasks) tasks_json.push_back(t.to_json());
    return {{"seed", seed}, {"tasks", tasks_json}};
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("PHICONVEX_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0') return v;
    }
    return kDefaultSeed;
}

AnalysisSpec parse_spec(const json& doc, std::optional<std::uint64_t> seed_override) {
    if (!doc.is_object()) throw Error("spec must be a JSON object");
    AnalysisSpec spec;
    spec.seed = default_seed();
    if (doc.contains("seed")) {
        if (!is_nonnegative_integer(doc["seed"])) field_error("seed", "expected an unsigned integer");
        spec.seed = doc["seed"].get<std::uint64_t>();
    }
    if (seed_override) spec.seed = *seed_override;

    json shared = doc;
    shared.erase("tasks");
    shared.erase("seed");
    if (doc.contains("tasks")) {
        const json& list = doc["tasks"];
        if (!list.is_array() || list.empty()) field_error("tasks", "expected a non-empty array");
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (!list[i].is_object()) field_error("tasks", "entries must be objects");
            json merged = shared;
            merged.update(list[i]);
            try {
                spec.tasks.push_back(parse_task(merged, spec.seed));
            } catch (const Error& e) {
                throw Error("task " + std::to_string(i + 1) + ": " + e.what());
            }
        }
    } else {
        spec.tasks.push_back(parse_task(shared, spec.seed));
    }
    return spec;
}

AnalysisSpec load_spec(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("spec file not found: " + path.string());
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        // e.byte is 1-based and points just past the offending character.
        std::size_t line = 1;
        std::size_t column = 1;
        const std::size_t stop = e.byte > 0 ? std::min(e.byte - 1, text.size()) : 0;
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw Error(path.string() + ":" + std::to_string(line) + ":" + std::to_string(column) +
                    ": JSON syntax error");
    }
    return parse_spec(doc, seed_override);
}

RunResult run_analysis(const AnalysisSpec& spec, const RunOptions& options) {
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();

    const std::size_t n = spec.tasks.size();
    std::vector<TaskOutcome> outcomes(n);
    std::vector<double> seconds(n, 0.0);
    auto work = [&](std::size_t i) {
        const auto t0 = Clock::now();
        outcomes[i] = run_task(spec.tasks[i]);
        seconds[i] = std::chrono::duration<double>(Clock::now() - t0).count();
    };
    if (options.parallel && n > 1) {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < n; ++i) pool.emplace_back(work, i);
    } else {
        for (std::size_t i = 0; i < n; ++i) work(i);
    }

    RunResult result;
    bool any_error = false;
    bool any_discrepancy = false;
    json tasks = json::array();
    char header[160];
    std::snprintf(header, sizeof header, "%-32s %-24s %15s %9s\n", "task", "verdict", "margin",
                  "seconds");
    result.summary = header;
    for (std::size_t i = 0; i < n; ++i) {
        TaskOutcome& o = outcomes[i];
        any_error |= o.error;
        any_discrepancy |= o.discrepancy;
        json entry = spec.tasks[i].to_json();
        entry["index"] = i + 1;
        entry["result"] = std::move(o.body);
        entry["seconds"] = seconds[i];
        tasks.push_back(std::move(entry));
        result.summary += format_row(task_label(spec.tasks[i], i), o.verdict, o.margin, seconds[i]);
    }
    result.exit_code = any_error ? 1 : (any_discrepancy ? 2 : 0);

    result.report = {
        {"toolkit", kToolkitName},
        {"version", kToolkitVersion},
        {"seed", spec.seed},
        {"spec", spec.to_json()},
        {"tasks", std::move(tasks)},
        {"exit_code", result.exit_code},
        {"wall_time_seconds", std::chrono::duration<double>(Clock::now() - start).count()},
    };
    return result;
}

json strip_timing(json report) {
    report.erase("wall_time_seconds");
    if (report.contains("tasks")) {
        for (auto& t : report["tasks"]) t.erase("seconds");
    }
    return report;
}

}  // namespace phiconvex

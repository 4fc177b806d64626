// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "axiom_cases.hpp"
#include "oracles.hpp"
#include "plankb/cli.hpp"
#include "plankb/macro.hpp"
#include "plankb/search.hpp"

using namespace plankb;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string &what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

kg::Graph fixture(const std::string &name) {
    return kg::import_turtle(oracle::read_text(oracle::data_dir() / "kg" / (name + ".ttl")));
}

std::vector<std::vector<mapper::StepText>> corpus(const std::string &name) {
    const auto d = oracle::domain(name);
    std::vector<std::vector<mapper::StepText>> out;
    for (const auto &stem : oracle::problem_stems(name)) {
        const auto p = oracle::problem(name, stem);
        const auto plan = strips::parse_plan(
            oracle::read_text(oracle::data_dir() / "plans" / name / (stem + ".plan")), d, p);
        std::vector<mapper::StepText> steps;
        for (const auto &s : plan.steps)
            steps.push_back({s.schema, s.args()});
        out.push_back(std::move(steps));
    }
    return out;
}

std::vector<macro::MacroSchema> composed(const std::string &name) {
    std::vector<macro::MacroSchema> out;
    for (const auto &m : macro::mine_and_compose(fixture(name), oracle::domain(name)))
        if (m.macro)
            out.push_back(*m.macro);
    return out;
}

// 1 --------------------------------------------------------------------------
Outcome round_trip() {
    Outcome o;
    std::size_t problems = 0;
    for (const std::string name : {"blocksworld", "gripper", "driverlog"}) {
        const auto d = oracle::domain(name);
        o.require(pddl::parse_domain(pddl::print_domain(d)) == d, name + " domain round trip");
        o.require(pddl::validate_domain(d).empty(), name + " has well-formedness issues");
        for (const auto &stem : oracle::problem_stems(name)) {
            const auto p = oracle::problem(name, stem);
            o.require(pddl::parse_problem(pddl::print_problem(p), d) == p, name + "/" + stem + " round trip");
            ++problems;
        }
    }
    o.require(problems >= 9, "fewer than 9 problems");
    if (o.ok)
        o.detail = "3 domains, " + std::to_string(problems) + " problems, 0 issues";
    return o;
}

// 2 --------------------------------------------------------------------------
Outcome axiom_suite() {
    Outcome o;
    const auto cases = oracle::seeded_violations();
    o.require(cases.size() == 13, "expected 13 negative fixtures");
    for (const auto &[axiom, g] : cases) {
        const auto found = kg::validate_axioms(g, kg::ValidationMode::post_solve);
        o.require(found.size() == 1 && found[0].axiom_id == axiom,
                  "negative fixture for axiom " + std::to_string(axiom));
    }
    for (const std::string name : {"blocksworld", "gripper", "driverlog", "trap", "ipc"}) {
        const auto g = fixture(name);
        o.require(kg::validate_axioms(g, kg::ValidationMode::pre_solve).empty(), name + " pre-solve");
        o.require(kg::validate_axioms(g, kg::ValidationMode::post_solve).empty(), name + " post-solve");
    }
    if (o.ok)
        o.detail = "13/13 seeded violations exact, 5 mapped fixtures clean in both modes";
    return o;
}

// 3 --------------------------------------------------------------------------
Outcome competency() {
    Outcome o;
    kg::Graph g = fixture("blocksworld");
    g.merge(fixture("gripper"));
    g.merge(fixture("ipc"));
    const mapper::QueryArgs args{{"planner", "lmcut"}, {"domain", "blocksworld"}, {"problem", "sussman"},
                                 {"action", "unstack"}, {"fact", "(on ?x ?y)"}};
    const mapper::QueryEvaluator naive = oracle::nested_loop;
    std::size_t non_empty = 0;
    for (const auto &q : mapper::competency_queries()) {
        auto a = args;
        if (q.id == "C2")
            a["domain"] = "scanalyzer";
        const auto got = mapper::run_competency(g, q.id, a);
        o.require(got == mapper::run_competency(g, q.id, a, naive), q.id + " differs from the oracle");
        non_empty += got.empty() ? 0 : 1;
    }
    o.require(non_empty == 10, "every question should have an answer on the seeded graph");
    const auto c7 = mapper::run_competency(g, "C7", {{"domain", "blocksworld"}, {"action", "unstack"}});
    o.require(c7.size() == 1 && std::get<kg::Literal>(c7[0].at("count")).lexical == "2", "C7(unstack) != 2");
    o.require(mapper::run_competency(g, "C3", {{"domain", "blocksworld"}}).size() == 4, "C3(blocksworld) != 4");
    if (o.ok)
        o.detail = "C1..C10 equal the nested-loop oracle; C7(unstack)=2, C3(blocksworld)=4";
    return o;
}

// 4 --------------------------------------------------------------------------
Outcome relevance() {
    Outcome o;
    using select::Relevance;
    o.require(select::relevance(7, 20) == Relevance::medium, "relevance(7,20)");
    o.require(select::relevance(14, 20) == Relevance::high, "relevance(14,20)");
    o.require(select::relevance(34, 100) == Relevance::low, "relevance(34,100)");
    o.require(select::relevance(35, 100) == Relevance::medium, "relevance(35,100)");
    o.require(select::relevance(70, 100) == Relevance::high, "relevance(70,100)");
    if (o.ok)
        o.detail = "(7,20)=medium (14,20)=high 34%=low, exact at 35%/70%";
    return o;
}

// 5 --------------------------------------------------------------------------
Outcome selection() {
    Outcome o;
    const auto rows = select::read_results_csv(oracle::read_text(oracle::data_dir() / "ipc/results.csv"));
    o.require(rows.size() == 56, "expected 56 cells");
    kg::Graph g;
    g.insert_all(mapper::map_ipc_results(rows));
    const auto candidates = select::planners_in(g);
    std::set<std::string> domains;
    for (const auto &r : rows)
        domains.insert(r.domain);
    for (const auto &d : domains)
        o.require(select::select_ontology(g, mapper::domain_iri(d), candidates).chosen ==
                      mapper::planner_iri(*oracle::spreadsheet_argmax(rows, d)),
                  "argmax differs for " + d);

    o.require(select::select_random(candidates, 99).chosen == select::select_random(candidates, 99).chosen,
              "random policy not seed-deterministic");
    constexpr int n = 10000;
    std::vector<int> counts(candidates.size(), 0);
    for (int seed = 0; seed < n; ++seed)
        ++counts[select::uniform_index(static_cast<std::uint64_t>(seed), candidates.size())];
    const double p = 1.0 / static_cast<double>(candidates.size());
    const double sigma = std::sqrt(n * p * (1 - p));
    double worst = 0;
    for (int c : counts)
        worst = std::max(worst, std::abs(c - n * p) / sigma);
    o.require(worst <= 4.0, "random draw outside 4 sigma");
    if (o.ok) {
        std::ostringstream s;
        s.precision(2);
        s << std::fixed << domains.size() << " domains match the spreadsheet argmax; max deviation " << worst
          << " sigma over " << n << " draws";
        o.detail = s.str();
    }
    return o;
}

// 6 --------------------------------------------------------------------------
Outcome mining() {
    Outcome o;
    for (const std::string name : {"blocksworld", "gripper", "driverlog"}) {
        const auto plans = corpus(name);
        std::map<oracle::PairKey, std::uint64_t> got;
        for (const auto &p : macro::mine_pairs(plans))
            got[{p.first, p.second, p.unifier}] += p.frequency;
        o.require(got == oracle::sliding_window(plans), name + " frequencies differ from the sliding window");
    }
    const std::map<std::string, std::vector<std::pair<std::string, std::string>>> published{
        {"blocksworld",
         {{"unstack", "put-down"}, {"pick-up", "stack"}, {"put-down", "unstack"}, {"stack", "pick-up"},
          {"unstack", "stack"}, {"put-down", "pick-up"}, {"stack", "unstack"}}},
        {"driverlog",
         {{"drive-truck", "unload-truck"}, {"drive-truck", "load-truck"}, {"board-truck", "drive-truck"},
          {"walk", "board-truck"}}},
        {"gripper", {{"pick", "move"}, {"move", "drop"}}},
    };
    std::size_t passed = 0;
    for (const auto &[name, pairs] : published) {
        const auto d = oracle::domain(name);
        const auto mined = macro::mine_pairs(corpus(name));
        for (const auto &[a, b] : pairs) {
            auto it = std::find_if(mined.begin(), mined.end(),
                                   [&](const macro::LiftedPair &p) { return p.first == a && p.second == b; });
            const bool ok = it != mined.end() && macro::chain_filter(d, *it);
            o.require(ok, a + " * " + b + " not mined or rejected");
            passed += ok ? 1 : 0;
        }
    }
    const auto bw = oracle::domain("blocksworld");
    const auto gr = oracle::domain("gripper");
    std::size_t rejected = 0;
    rejected += macro::chain_filter(bw, {"pick-up", "pick-up", {}, 1}) ? 0 : 1;
    rejected += macro::chain_filter(bw, {"stack", "stack", {{0, 0}}, 1}) ? 0 : 1;
    rejected += macro::chain_filter(bw, {"put-down", "put-down", {}, 1}) ? 0 : 1;
    rejected += macro::chain_filter(gr, {"drop", "drop", {{0, 0}, {1, 1}, {2, 2}}, 1}) ? 0 : 1;
    o.require(rejected >= 3, "fewer than 3 synthetic pairs rejected");
    if (o.ok)
        o.detail = "frequencies exact; " + std::to_string(passed) + "/13 published pairs chain; " +
                   std::to_string(rejected) + "/4 synthetic pairs rejected";
    return o;
}

// 7 --------------------------------------------------------------------------
Outcome macro_semantics() {
    Outcome o;
    std::size_t macros = 0, checked = 0, bad = 0;
    const std::vector<std::pair<std::string, std::vector<std::string>>> cases{
        {"blocksworld", {"figure", "p03"}}, {"gripper", {"p01"}}};
    for (const auto &[name, stems] : cases) {
        const auto d = oracle::domain(name);
        for (const auto &m : composed(name)) {
            ++macros;
            for (const auto &stem : stems) {
                const auto r = oracle::macro_sweep(d, m, oracle::problem(name, stem));
                checked += r.checked;
                bad += r.counterexamples;
            }
        }
    }
    o.require(macros > 0 && checked > 0, "nothing was checked");
    o.require(bad == 0, std::to_string(bad) + " counterexamples");
    if (o.ok)
        o.detail = std::to_string(macros) + " macros, " + std::to_string(checked) +
                   " applicable (state, grounding) pairs, 0 counterexamples";
    return o;
}

// 8 --------------------------------------------------------------------------
Outcome directional() {
    Outcome o;
    search::SearchConfig cfg;
    cfg.algorithm = search::Algorithm::greedy_best_first;
    cfg.heuristic = search::Heuristic::goal_count;
    std::ostringstream s;
    s.precision(2);
    s << std::fixed;
    for (const std::string name : {"blocksworld", "gripper", "driverlog"}) {
        const auto d = oracle::domain(name);
        std::vector<pddl::ProblemDef> problems;
        for (const auto &stem : oracle::problem_stems(name)) {
            auto p = oracle::problem(name, stem);
            if (name == "blocksworld" && p.objects.size() > 6)
                continue;
            problems.push_back(std::move(p));
        }
        if (name == "blocksworld")
            o.require(problems.size() >= 10, "fewer than 10 blocksworld instances");
        const auto r = search::bench_compare(d, composed(name), problems, cfg, 2);
        const bool reduced = r.original.failed == 0 && r.macro.failed == 0 &&
                             r.macro.mean_expanded < r.original.mean_expanded;
        if (name != "driverlog")
            o.require(reduced, name + " mean expanded not reduced");
        s << name << " " << r.original.mean_expanded << " -> " << r.macro.mean_expanded
          << (name == "driverlog" ? " (reported only)" : "") << (name == "driverlog" ? "" : "; ");
    }
    if (o.ok)
        o.detail = s.str();
    else
        o.detail += " [" + s.str() + "]";
    return o;
}

// 9 --------------------------------------------------------------------------
Outcome optimality() {
    Outcome o;
    std::size_t compared = 0;
    search::SearchConfig bfs;
    bfs.algorithm = search::Algorithm::breadth_first;
    for (const std::string name : {"blocksworld", "gripper", "driverlog", "trap"}) {
        const auto d = oracle::domain(name);
        for (const auto &stem : oracle::problem_stems(name)) {
            const auto p = oracle::problem(name, stem);
            const auto ref = oracle::explore(d, p, 100'000);
            if (!ref.complete)
                continue;
            const auto r = search::solve(d, p, bfs);
            o.require(r.stats.plan_cost == ref.optimum, name + "/" + stem + " cost differs from the optimum");
            ++compared;
        }
    }
    if (o.ok)
        o.detail = std::to_string(compared) + " instances match the exhaustive optimum";
    return o;
}

// 10 -------------------------------------------------------------------------
Outcome end_to_end() {
    Outcome o;
    std::random_device rd;
    const fs::path dir = fs::temp_directory_path() / ("plankb-acceptance-" + std::to_string(rd()));
    fs::create_directories(dir);
    const auto data = [](const std::string &rel) { return (oracle::data_dir() / rel).string(); };
    const auto at = [&](const std::string &name) { return (dir / name).string(); };
    std::string bench_out;
    auto step = [&](std::vector<std::string> args, std::string *capture = nullptr) {
        if (!o.ok)
            return;
        std::ostringstream out, err;
        const int code = cli::dispatch(args, out, err);
        o.require(code == 0, args.front() + " exited " + std::to_string(code) + ": " + err.str());
        if (capture)
            *capture = out.str();
    };

    std::vector<std::string> build{"build-kg", data("domains/blocksworld.pddl")};
    for (const auto &stem : oracle::problem_stems("blocksworld"))
        build.push_back(data("problems/blocksworld/" + stem + ".pddl"));
    build.insert(build.end(), {"--solve", "--planner", "builtin-bfs", "-o", at("bw.ttl")});
    step(build);
    step({"ingest-ipc", data("ipc/builtin-results.csv"), "--planners", data("ipc/planners.csv"), "--graph",
          at("bw.ttl"), "-o", at("kg.ttl")});
    step({"select-planner", "--domain", "blocksworld", at("kg.ttl")});
    step({"mine-macros", "--domain", "blocksworld", at("kg.ttl"), "-o", at("macros.json")});
    step({"augment", "--domain", data("domains/blocksworld.pddl"), "--macros", at("macros.json"), "-o",
          at("augmented.pddl")});
    step({"bench", "--domain", data("domains/blocksworld.pddl"), "--problems", data("problems/blocksworld"),
          "--macros", at("macros.json"), "--format", "json"},
         &bench_out);

    if (o.ok) {
        const auto j = nlohmann::json::parse(bench_out);
        for (const auto &summary : j["summaries"]) {
            const std::string variant = summary["variant"];
            std::uint64_t solved = 0, failed = 0, expanded = 0, evaluated = 0, generated = 0, cost = 0;
            for (const auto &row : j["rows"]) {
                if (row["variant"] != variant)
                    continue;
                if (row["status"] != "solved") {
                    ++failed;
                    continue;
                }
                ++solved;
                expanded += row["expanded"].get<std::uint64_t>();
                evaluated += row["evaluated"].get<std::uint64_t>();
                generated += row["generated"].get<std::uint64_t>();
                cost += row["cost"].get<std::uint64_t>();
            }
            o.require(summary["solved"] == solved && summary["failed"] == failed, variant + " counts");
            o.require(summary["sum_expanded"] == expanded && summary["sum_evaluated"] == evaluated &&
                          summary["sum_generated"] == generated && summary["sum_cost"] == cost,
                      variant + " sums");
            if (solved > 0)
                o.require(summary["mean_expanded"].get<double>() ==
                                  static_cast<double>(expanded) / static_cast<double>(solved) &&
                              summary["mean_cost"].get<double>() ==
                                  static_cast<double>(cost) / static_cast<double>(solved),
                          variant + " means");
        }
        if (o.ok)
            o.detail = "6 stages exit 0; " + std::to_string(j["rows"].size()) +
                       " bench rows recompute both summaries exactly";
    }
    fs::remove_all(dir);
    return o;
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char *name;
        double limit_seconds;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "PDDL round-trip", 1.0, round_trip},
        {2, "axiom suite", 1.0, axiom_suite},
        {3, "competency coverage", 0, competency},
        {4, "relevance boundaries", 0, relevance},
        {5, "selection policies", 0, selection},
        {6, "macro mining oracle", 0, mining},
        {7, "macro semantics", 30.0, macro_semantics},
        {8, "directional macro reduction", 120.0, directional},
        {9, "breadth-first optimality", 0, optimality},
        {10, "end-to-end pipeline", 0, end_to_end},
    };
    int failures = 0;
    for (const auto &c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.limit_seconds > 0 && secs >= c.limit_seconds) {
            o.ok = false;
            o.detail += " (runtime over " + std::to_string(c.limit_seconds) + " s)";
        }
        failures += o.ok ? 0 : 1;
        std::ostringstream time;
        time.precision(3);
        time << std::fixed << secs;
        std::cout << (o.ok ? "PASS" : "FAIL") << "  criterion " << c.id << "  " << c.name << "  " << time.str()
                  << " s  " << o.detail << '\n';
    }
    return failures == 0 ? 0 : 1;
}

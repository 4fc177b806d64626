#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plankb/kg.hpp"
#include "plankb/macro.hpp"
#include "plankb/pddl.hpp"
#include "plankb/strips.hpp"

namespace plankb::search {

enum class Algorithm { breadth_first, greedy_best_first, astar };
enum class Heuristic { goal_count, zero };

std::string_view to_string(Algorithm a) noexcept;
std::string_view to_string(Heuristic h) noexcept;
std::optional<Algorithm> parse_algorithm(std::string_view s) noexcept;
std::optional<Heuristic> parse_heuristic(std::string_view s) noexcept;

struct SearchConfig {
    Algorithm algorithm = Algorithm::greedy_best_first;
    Heuristic heuristic = Heuristic::goal_count;
    std::uint64_t max_expansions = 2'000'000;
    double max_seconds = 60.0;
    std::uint64_t seed = 0; // recorded only; tie order is FIFO by generation
};

enum class SearchStatus { solved, exhausted, limit_exceeded };

std::string_view to_string(SearchStatus s) noexcept;

struct SearchStats {
    std::uint64_t expanded = 0;
    std::uint64_t evaluated = 0;
    std::uint64_t generated = 0;
    std::optional<std::uint64_t> plan_cost;
    double wall_time = 0.0;
};

struct SearchResult {
    SearchStatus status = SearchStatus::exhausted;
    std::optional<strips::Plan> plan;
    SearchStats stats;
};

/// Forward search over the grounded task. Duplicates are pruned when
/// generated, so only new states are evaluated; the goal is tested when a
/// node is popped. A* reopens a state reached again with a lower g, evaluating
/// it again if it was already expanded.
SearchResult solve(const pddl::DomainDef &domain, const pddl::ProblemDef &problem,
                   const SearchConfig &config = {});

/// Number of states reachable from the initial state (capped at `limit`,
/// returning nullopt beyond it).
std::optional<std::size_t> count_reachable(const pddl::DomainDef &domain,
                                           const pddl::ProblemDef &problem, std::size_t limit);

// ---------------------------------------------------------------------------
// Original-vs-macro comparison

struct BenchRow {
    std::string problem;
    std::string variant; // "original" | "macro"
    SearchStatus status = SearchStatus::exhausted;
    SearchStats stats;
    /// Plan length with each macro step counted as its two primitives.
    std::optional<std::uint64_t> expanded_length;
};

struct VariantSummary {
    std::string variant;
    std::size_t solved = 0;
    std::size_t failed = 0;
    // Integer sums over solved rows; means are sum / solved.
    std::uint64_t sum_expanded = 0;
    std::uint64_t sum_evaluated = 0;
    std::uint64_t sum_generated = 0;
    std::uint64_t sum_cost = 0;
    double mean_expanded = 0.0;
    double mean_evaluated = 0.0;
    double mean_generated = 0.0;
    double mean_cost = 0.0;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    VariantSummary original;
    VariantSummary macro;
    /// Problems where the macro variant expanded more nodes or failed.
    std::vector<std::string> regressions;
    /// `problem/variant` of every unsolved row.
    std::vector<std::string> failures;
};

VariantSummary summarize(const std::vector<BenchRow> &rows, const std::string &variant);

BenchReport bench_compare(const pddl::DomainDef &domain,
                          const std::vector<macro::MacroSchema> &macros,
                          const std::vector<pddl::ProblemDef> &problems,
                          const SearchConfig &config = {}, std::size_t k = 2);

/// `problem,variant,expanded,evaluated,generated,cost,time`
std::string bench_csv(const BenchReport &report);
std::string bench_table(const BenchReport &report);
/// Rows plus both summaries, regressions and failures.
nlohmann::json bench_json(const BenchReport &report);

// ---------------------------------------------------------------------------
// Planner-selection experiment over the built-in configurations

struct PlannerConfig {
    std::string name; // registered planner name, e.g. builtin-bfs
    SearchConfig config;
};

/// builtin-bfs, builtin-gbfs-goalcount, builtin-astar-goalcount.
std::vector<PlannerConfig> builtin_planners();

struct DomainBundle {
    pddl::DomainDef domain;
    std::vector<pddl::ProblemDef> problems;
};

struct PolicyRow {
    std::string domain;
    std::string problem;
    std::string policy;
    std::string planner; // empty when selection failed
    SearchStatus status = SearchStatus::exhausted;
    SearchStats stats;
    std::string note;
};

struct PolicySummary {
    std::string domain;
    std::string policy;
    std::size_t solved = 0;
    std::size_t failed = 0;
    std::uint64_t sum_expanded = 0;
    std::uint64_t sum_cost = 0;
    double mean_expanded = 0.0;
    double mean_cost = 0.0;
};

struct PolicyReport {
    std::vector<PolicyRow> rows;
    std::vector<PolicySummary> summaries; // per (domain, policy), sorted
};

/// For each problem, picks a planner with the ontology policy and with the
/// seeded random policy, solves with each, and averages solved rows.
/// `limits` caps every run (algorithm fields are taken from the planner).
PolicyReport policy_experiment(const kg::Graph &graph, const std::vector<DomainBundle> &bundles,
                               const std::vector<PlannerConfig> &planners,
                               const SearchConfig &limits, std::uint64_t seed);

std::string policy_table(const PolicyReport &report);
nlohmann::json policy_json(const PolicyReport &report);

} // namespace plankb::search

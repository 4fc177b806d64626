#include "plankb/search.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <map>
#include <queue>
#include <set>
#include <unordered_map>

#include "plankb/errors.hpp"

namespace plankb::search {

std::string_view to_string(Algorithm a) noexcept {
    switch (a) {
    case Algorithm::breadth_first: return "breadth-first";
    case Algorithm::greedy_best_first: return "greedy-best-first";
    case Algorithm::astar: return "a-star";
    }
    return "greedy-best-first";
}

std::string_view to_string(Heuristic h) noexcept {
    return h == Heuristic::goal_count ? "goal-count" : "zero";
}

std::optional<Algorithm> parse_algorithm(std::string_view s) noexcept {
    if (s == "breadth-first" || s == "bfs")
        return Algorithm::breadth_first;
    if (s == "greedy-best-first" || s == "gbfs")
        return Algorithm::greedy_best_first;
    if (s == "a-star" || s == "astar")
        return Algorithm::astar;
    return std::nullopt;
}

std::optional<Heuristic> parse_heuristic(std::string_view s) noexcept {
    if (s == "goal-count")
        return Heuristic::goal_count;
    if (s == "zero")
        return Heuristic::zero;
    return std::nullopt;
}

std::string_view to_string(SearchStatus s) noexcept {
    switch (s) {
    case SearchStatus::solved: return "solved";
    case SearchStatus::exhausted: return "exhausted";
    case SearchStatus::limit_exceeded: return "limit-exceeded";
    }
    return "exhausted";
}

namespace {

using Bits = std::vector<std::uint64_t>;

struct BitsHash {
    std::size_t operator()(const Bits &b) const noexcept {
        std::uint64_t h = 1469598103934665603ULL;
        for (std::uint64_t w : b) {
            h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

bool test(const Bits &b, std::uint32_t i) { return (b[i >> 6] >> (i & 63)) & 1U; }
void set(Bits &b, std::uint32_t i) { b[i >> 6] |= std::uint64_t{1} << (i & 63); }
void clear(Bits &b, std::uint32_t i) { b[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

struct CompiledAction {
    std::vector<std::uint32_t> pre_pos, pre_neg, add, del;
    std::uint32_t cost = 1;
    std::size_t source = 0; // index into the ground action list
};

/// Grounded task with interned atoms and bitset states.
struct Task {
    std::vector<strips::GroundAction> ground;
    std::vector<CompiledAction> actions;
    std::size_t words = 0;
    Bits init;
    std::vector<std::uint32_t> goal_pos;
    std::vector<std::uint32_t> goal_neg;
    bool statically_unreachable = false;

    Task(const pddl::DomainDef &d, const pddl::ProblemDef &p) {
        ground = strips::ground(d, p);
        std::map<strips::GroundAtom, std::uint32_t> ids;
        auto intern = [&](const strips::GroundAtom &a) {
            return ids.try_emplace(a, static_cast<std::uint32_t>(ids.size())).first->second;
        };
        const strips::State init_state = strips::make_state(p.init);
        std::set<strips::GroundAtom> reachable_atoms(init_state.begin(), init_state.end());
        for (const auto &a : ground)
            reachable_atoms.insert(a.add.begin(), a.add.end());

        std::vector<std::uint32_t> init_ids;
        for (const auto &a : init_state)
            init_ids.push_back(intern(a));
        for (std::size_t i = 0; i < ground.size(); ++i) {
            const strips::GroundAction &g = ground[i];
            // Preconditions on atoms nothing can make true never hold.
            if (std::any_of(g.pre_pos.begin(), g.pre_pos.end(),
                            [&](const auto &a) { return !reachable_atoms.contains(a); }))
                continue;
            CompiledAction c;
            c.cost = g.cost;
            c.source = i;
            for (const auto &a : g.pre_pos)
                c.pre_pos.push_back(intern(a));
            for (const auto &a : g.pre_neg)
                c.pre_neg.push_back(intern(a));
            for (const auto &a : g.add)
                c.add.push_back(intern(a));
            for (const auto &a : g.del)
                c.del.push_back(intern(a));
            actions.push_back(std::move(c));
        }
        std::set<std::uint32_t> deletable;
        for (const auto &c : actions)
            deletable.insert(c.del.begin(), c.del.end());
        for (const pddl::Literal &l : p.goal) {
            strips::GroundAtom a = strips::ground_atom(l.atom);
            if (l.positive) {
                if (!reachable_atoms.contains(a))
                    statically_unreachable = true;
                goal_pos.push_back(intern(a));
            } else {
                auto it = ids.find(a);
                if (it == ids.end())
                    continue; // never true
                if (init_state.contains(a) && !deletable.contains(it->second))
                    statically_unreachable = true;
                goal_neg.push_back(it->second);
            }
        }
        words = (ids.size() + 63) / 64;
        init.assign(words, 0);
        for (std::uint32_t id : init_ids)
            set(init, id);
    }

    bool applicable(const Bits &s, const CompiledAction &a) const {
        for (std::uint32_t i : a.pre_pos)
            if (!test(s, i))
                return false;
        for (std::uint32_t i : a.pre_neg)
            if (test(s, i))
                return false;
        return true;
    }

    Bits successor(const Bits &s, const CompiledAction &a) const {
        Bits out = s;
        for (std::uint32_t i : a.del)
            clear(out, i);
        for (std::uint32_t i : a.add)
            set(out, i);
        return out;
    }

    std::uint64_t unsatisfied(const Bits &s) const {
        std::uint64_t n = 0;
        for (std::uint32_t i : goal_pos)
            n += test(s, i) ? 0 : 1;
        for (std::uint32_t i : goal_neg)
            n += test(s, i) ? 1 : 0;
        return n;
    }

    bool goal(const Bits &s) const { return unsatisfied(s) == 0; }
};

struct Node {
    std::int64_t parent = -1;
    std::int64_t action = -1;
    std::uint64_t g = 0;
    std::uint64_t h = 0;
};

struct OpenEntry {
    std::uint64_t key;
    std::uint64_t order;
    std::uint32_t node;
    std::uint64_t g;
    bool operator>(const OpenEntry &o) const {
        return key != o.key ? key > o.key : order > o.order;
    }
};

} // namespace

SearchResult solve(const pddl::DomainDef &domain, const pddl::ProblemDef &problem,
                   const SearchConfig &cfg) {
    if (cfg.max_expansions == 0 || cfg.max_seconds <= 0)
        throw Error("InvalidConfig", "search limits must be positive");
    const auto start = std::chrono::steady_clock::now();
    const Task task(domain, problem);
    SearchResult result;
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    auto finish = [&](SearchStatus status) {
        result.status = status;
        result.stats.wall_time = elapsed();
        return result;
    };
    SearchStats &st = result.stats;
    st.generated = 1;
    if (task.statically_unreachable)
        return finish(SearchStatus::exhausted);

    auto heuristic = [&](const Bits &s) -> std::uint64_t {
        ++st.evaluated;
        return cfg.heuristic == Heuristic::goal_count ? task.unsatisfied(s) : 0;
    };

    std::vector<Bits> states{task.init};
    std::vector<Node> nodes{Node{-1, -1, 0, heuristic(task.init)}};
    std::unordered_map<Bits, std::uint32_t, BitsHash> index{{task.init, 0}};
    std::vector<bool> closed{false};

    std::deque<std::uint32_t> fifo;
    std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> heap;
    std::uint64_t order = 0;
    auto key_of = [&](std::uint32_t n) {
        return cfg.algorithm == Algorithm::astar ? nodes[n].g + nodes[n].h : nodes[n].h;
    };
    auto push = [&](std::uint32_t n) {
        if (cfg.algorithm == Algorithm::breadth_first)
            fifo.push_back(n);
        else
            heap.push({key_of(n), order++, n, nodes[n].g});
    };
    push(0);

    while (!fifo.empty() || !heap.empty()) {
        std::uint32_t n;
        if (cfg.algorithm == Algorithm::breadth_first) {
            n = fifo.front();
            fifo.pop_front();
        } else {
            OpenEntry e = heap.top();
            heap.pop();
            n = e.node;
            if (e.g != nodes[n].g)
                continue; // superseded by a cheaper path
        }
        if (closed[n])
            continue;
        if (task.goal(states[n])) {
            std::vector<strips::GroundAction> steps;
            for (std::int64_t at = n; nodes[static_cast<std::size_t>(at)].parent >= 0;
                 at = nodes[static_cast<std::size_t>(at)].parent)
                steps.push_back(task.ground[task.actions[static_cast<std::size_t>(
                                                             nodes[static_cast<std::size_t>(at)].action)]
                                                .source]);
            std::reverse(steps.begin(), steps.end());
            result.plan = strips::Plan::from_steps(std::move(steps));
            st.plan_cost = result.plan->cost;
            return finish(SearchStatus::solved);
        }
        if (st.expanded >= cfg.max_expansions ||
            ((st.expanded & 255) == 0 && elapsed() > cfg.max_seconds))
            return finish(SearchStatus::limit_exceeded);
        closed[n] = true;
        ++st.expanded;

        const Bits parent_state = states[n];
        const std::uint64_t parent_g = nodes[n].g;
        for (std::size_t ai = 0; ai < task.actions.size(); ++ai) {
            const CompiledAction &a = task.actions[ai];
            if (!task.applicable(parent_state, a))
                continue;
            ++st.generated;
            Bits next = task.successor(parent_state, a);
            const std::uint64_t g = parent_g + a.cost;
            auto found = index.find(next);
            if (found != index.end()) {
                Node &old = nodes[found->second];
                if (cfg.algorithm == Algorithm::astar && g < old.g) {
                    old.g = g;
                    old.parent = n;
                    old.action = static_cast<std::int64_t>(ai);
                    if (closed[found->second])
                        old.h = heuristic(states[found->second]);
                    closed[found->second] = false;
                    push(found->second);
                }
                continue;
            }
            const auto id = static_cast<std::uint32_t>(states.size());
            const std::uint64_t h = heuristic(next);
            index.emplace(next, id);
            states.push_back(std::move(next));
            nodes.push_back(Node{n, static_cast<std::int64_t>(ai), g, h});
            closed.push_back(false);
            push(id);
        }
    }
    return finish(SearchStatus::exhausted);
}

std::optional<std::size_t> count_reachable(const pddl::DomainDef &domain,
                                           const pddl::ProblemDef &problem, std::size_t limit) {
    const Task task(domain, problem);
    std::unordered_map<Bits, bool, BitsHash> seen{{task.init, true}};
    std::deque<Bits> queue{task.init};
    while (!queue.empty()) {
        Bits s = std::move(queue.front());
        queue.pop_front();
        for (const CompiledAction &a : task.actions) {
            if (!task.applicable(s, a))
                continue;
            Bits next = task.successor(s, a);
            if (seen.emplace(next, true).second) {
                if (seen.size() > limit)
                    return std::nullopt;
                queue.push_back(std::move(next));
            }
        }
    }
    return seen.size();
}

// ---------------------------------------------------------------------------

VariantSummary summarize(const std::vector<BenchRow> &rows, const std::string &variant) {
    VariantSummary s;
    s.variant = variant;
    for (const BenchRow &r : rows) {
        if (r.variant != variant)
            continue;
        if (r.status != SearchStatus::solved) {
            ++s.failed;
            continue;
        }
        ++s.solved;
        s.sum_expanded += r.stats.expanded;
        s.sum_evaluated += r.stats.evaluated;
        s.sum_generated += r.stats.generated;
        s.sum_cost += r.stats.plan_cost.value_or(0);
    }
    if (s.solved > 0) {
        const double n = static_cast<double>(s.solved);
        s.mean_expanded = static_cast<double>(s.sum_expanded) / n;
        s.mean_evaluated = static_cast<double>(s.sum_evaluated) / n;
        s.mean_generated = static_cast<double>(s.sum_generated) / n;
        s.mean_cost = static_cast<double>(s.sum_cost) / n;
    }
    return s;
}

BenchReport bench_compare(const pddl::DomainDef &domain, const std::vector<macro::MacroSchema> &macros,
                          const std::vector<pddl::ProblemDef> &problems, const SearchConfig &cfg,
                          std::size_t k) {
    const pddl::DomainDef augmented = macro::augment_domain(domain, macros, k);
    BenchReport report;
    for (const pddl::ProblemDef &p : problems) {
        for (const auto &[variant, d] : {std::pair<std::string, const pddl::DomainDef *>{"original", &domain},
                                         {"macro", &augmented}}) {
            SearchResult r = solve(*d, p, cfg);
            BenchRow row{p.name, variant, r.status, r.stats, std::nullopt};
            if (r.plan) {
                strips::ValidationReport check = strips::validate_plan(*d, p, *r.plan);
                if (!check.valid)
                    throw Error("InternalError", "search returned an invalid plan for " + p.name +
                                                     ": " + check.message);
                std::uint64_t length = 0;
                for (const strips::GroundAction &step : r.plan->steps)
                    length += domain.find_action(step.schema) != nullptr ? 1 : 2;
                row.expanded_length = length;
            } else {
                report.failures.push_back(p.name + "/" + variant);
            }
            report.rows.push_back(std::move(row));
        }
        const BenchRow &orig = report.rows[report.rows.size() - 2];
        const BenchRow &mac = report.rows.back();
        const bool orig_ok = orig.status == SearchStatus::solved;
        const bool mac_ok = mac.status == SearchStatus::solved;
        if ((orig_ok && !mac_ok) || (orig_ok && mac_ok && mac.stats.expanded > orig.stats.expanded))
            report.regressions.push_back(p.name);
    }
    report.original = summarize(report.rows, "original");
    report.macro = summarize(report.rows, "macro");
    return report;
}

namespace {

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string pad(const std::string &s, std::size_t w, bool right = true) {
    if (s.size() >= w)
        return s;
    return right ? std::string(w - s.size(), ' ') + s : s + std::string(w - s.size(), ' ');
}

} // namespace

std::string bench_csv(const BenchReport &report) {
    std::string out = "problem,variant,expanded,evaluated,generated,cost,time\n";
    for (const BenchRow &r : report.rows) {
        out += r.problem + "," + r.variant + "," + std::to_string(r.stats.expanded) + "," +
               std::to_string(r.stats.evaluated) + "," + std::to_string(r.stats.generated) + "," +
               (r.stats.plan_cost ? std::to_string(*r.stats.plan_cost) : std::string()) + "," +
               fixed(r.stats.wall_time, 6) + "\n";
    }
    return out;
}

std::string bench_table(const BenchReport &report) {
    std::string out;
    out += pad("problem", 14, false) + pad("variant", 10, false) + pad("status", 16, false) +
           pad("expanded", 10) + pad("evaluated", 11) + pad("generated", 11) + pad("cost", 6) +
           pad("steps", 7) + pad("time(s)", 10) + "\n";
    for (const BenchRow &r : report.rows) {
        out += pad(r.problem, 14, false) + pad(r.variant, 10, false) +
               pad(std::string(to_string(r.status)), 16, false) + pad(std::to_string(r.stats.expanded), 10) +
               pad(std::to_string(r.stats.evaluated), 11) + pad(std::to_string(r.stats.generated), 11) +
               pad(r.stats.plan_cost ? std::to_string(*r.stats.plan_cost) : "-", 6) +
               pad(r.expanded_length ? std::to_string(*r.expanded_length) : "-", 7) +
               pad(fixed(r.stats.wall_time, 4), 10) + "\n";
    }
    out += "\n";
    out += pad("variant", 10, false) + pad("solved", 8) + pad("failed", 8) + pad("avg exp", 12) +
           pad("avg eval", 12) + pad("avg gen", 12) + pad("avg cost", 10) + "\n";
    for (const VariantSummary *s : {&report.original, &report.macro}) {
        out += pad(s->variant, 10, false) + pad(std::to_string(s->solved), 8) +
               pad(std::to_string(s->failed), 8) + pad(fixed(s->mean_expanded, 2), 12) +
               pad(fixed(s->mean_evaluated, 2), 12) + pad(fixed(s->mean_generated, 2), 12) +
               pad(fixed(s->mean_cost, 2), 10) + "\n";
    }
    if (!report.regressions.empty()) {
        out += "\nmacro variant regressed on:";
        for (const std::string &p : report.regressions)
            out += " " + p;
        out += "\n";
    }
    if (!report.failures.empty()) {
        out += "unsolved:";
        for (const std::string &f : report.failures)
            out += " " + f;
        out += "\n";
    }
    return out;
}

namespace {

nlohmann::json stats_json(const SearchStats &s) {
    nlohmann::json j{{"expanded", s.expanded},
                     {"evaluated", s.evaluated},
                     {"generated", s.generated},
                     {"cost", nullptr},
                     {"time", s.wall_time}};
    if (s.plan_cost)
        j["cost"] = *s.plan_cost;
    return j;
}

nlohmann::json summary_json(const VariantSummary &s) {
    return {{"variant", s.variant},           {"solved", s.solved},
            {"failed", s.failed},             {"sum_expanded", s.sum_expanded},
            {"sum_evaluated", s.sum_evaluated}, {"sum_generated", s.sum_generated},
            {"sum_cost", s.sum_cost},         {"mean_expanded", s.mean_expanded},
            {"mean_evaluated", s.mean_evaluated}, {"mean_generated", s.mean_generated},
            {"mean_cost", s.mean_cost}};
}

} // namespace

nlohmann::json bench_json(const BenchReport &report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const BenchRow &r : report.rows) {
        nlohmann::json row = stats_json(r.stats);
        row["problem"] = r.problem;
        row["variant"] = r.variant;
        row["status"] = std::string(to_string(r.status));
        row["steps"] = r.expanded_length ? nlohmann::json(*r.expanded_length) : nlohmann::json(nullptr);
        rows.push_back(std::move(row));
    }
    return {{"rows", rows},
            {"summaries", {summary_json(report.original), summary_json(report.macro)}},
            {"regressions", report.regressions},
            {"failures", report.failures}};
}

// ---------------------------------------------------------------------------

std::vector<PlannerConfig> builtin_planners() {
    SearchConfig bfs;
    bfs.algorithm = Algorithm::breadth_first;
    bfs.heuristic = Heuristic::zero;
    SearchConfig gbfs;
    gbfs.algorithm = Algorithm::greedy_best_first;
    gbfs.heuristic = Heuristic::goal_count;
    SearchConfig astar;
    astar.algorithm = Algorithm::astar;
    astar.heuristic = Heuristic::goal_count;
    return {{"builtin-astar-goalcount", astar}, {"builtin-bfs", bfs}, {"builtin-gbfs-goalcount", gbfs}};
}

PolicyReport policy_experiment(const kg::Graph &graph, const std::vector<DomainBundle> &bundles,
                               const std::vector<PlannerConfig> &planners, const SearchConfig &limits,
                               std::uint64_t seed) {
    if (planners.empty())
        throw NoCandidates("no planner configurations registered");
    std::vector<kg::Iri> candidates;
    std::map<kg::Iri, const PlannerConfig *> by_iri;
    for (const PlannerConfig &p : planners) {
        kg::Iri iri = mapper::planner_iri(p.name);
        candidates.push_back(iri);
        by_iri[iri] = &p;
    }

    PolicyReport report;
    std::map<std::pair<std::string, std::string>, SearchResult> cache; // (planner, domain/problem)
    std::uint64_t draw = 0;
    for (const DomainBundle &b : bundles) {
        const kg::Iri domain = mapper::domain_iri(b.domain.name);
        for (const pddl::ProblemDef &p : b.problems) {
            for (const select::Policy policy : {select::Policy::ontology, select::Policy::random}) {
                PolicyRow row{b.domain.name, p.name, std::string(select::to_string(policy)), {}, {}, {}, {}};
                std::optional<select::SelectionOutcome> choice;
                try {
                    choice = policy == select::Policy::ontology
                                 ? select::select_ontology(graph, domain, candidates)
                                 : select::select_random(candidates, seed + draw);
                } catch (const NoDataForDomain &e) {
                    row.note = e.what();
                }
                if (policy == select::Policy::random)
                    ++draw;
                if (choice) {
                    const PlannerConfig &pc = *by_iri.at(choice->chosen);
                    row.planner = pc.name;
                    row.note = choice->rationale;
                    auto key = std::make_pair(pc.name, b.domain.name + "/" + p.name);
                    auto it = cache.find(key);
                    if (it == cache.end()) {
                        SearchConfig cfg = pc.config;
                        cfg.max_expansions = limits.max_expansions;
                        cfg.max_seconds = limits.max_seconds;
                        it = cache.emplace(key, solve(b.domain, p, cfg)).first;
                    }
                    row.status = it->second.status;
                    row.stats = it->second.stats;
                }
                report.rows.push_back(std::move(row));
            }
        }
    }

    std::map<std::pair<std::string, std::string>, PolicySummary> sums;
    for (const PolicyRow &r : report.rows) {
        PolicySummary &s = sums[{r.domain, r.policy}];
        s.domain = r.domain;
        s.policy = r.policy;
        if (r.planner.empty() || r.status != SearchStatus::solved) {
            ++s.failed;
            continue;
        }
        ++s.solved;
        s.sum_expanded += r.stats.expanded;
        s.sum_cost += r.stats.plan_cost.value_or(0);
    }
    for (auto &[key, s] : sums) {
        if (s.solved > 0) {
            s.mean_expanded = static_cast<double>(s.sum_expanded) / static_cast<double>(s.solved);
            s.mean_cost = static_cast<double>(s.sum_cost) / static_cast<double>(s.solved);
        }
        report.summaries.push_back(s);
    }
    return report;
}

std::string policy_table(const PolicyReport &report) {
    std::string out = pad("domain", 14, false) + pad("policy", 10, false) + pad("solved", 8) +
                      pad("failed", 8) + pad("avg exp", 12) + pad("avg cost", 10) + "\n";
    for (const PolicySummary &s : report.summaries)
        out += pad(s.domain, 14, false) + pad(s.policy, 10, false) + pad(std::to_string(s.solved), 8) +
               pad(std::to_string(s.failed), 8) + pad(fixed(s.mean_expanded, 2), 12) +
               pad(fixed(s.mean_cost, 2), 10) + "\n";
    return out;
}

nlohmann::json policy_json(const PolicyReport &report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const PolicyRow &r : report.rows) {
        nlohmann::json row = stats_json(r.stats);
        row["domain"] = r.domain;
        row["problem"] = r.problem;
        row["policy"] = r.policy;
        row["planner"] = r.planner;
        row["status"] = r.planner.empty() ? std::string("unselected") : std::string(to_string(r.status));
        row["note"] = r.note;
        rows.push_back(std::move(row));
    }
    nlohmann::json sums = nlohmann::json::array();
    for (const PolicySummary &s : report.summaries)
        sums.push_back({{"domain", s.domain},
                        {"policy", s.policy},
                        {"solved", s.solved},
                        {"failed", s.failed},
                        {"sum_expanded", s.sum_expanded},
                        {"sum_cost", s.sum_cost},
                        {"mean_expanded", s.mean_expanded},
                        {"mean_cost", s.mean_cost}});
    return {{"rows", rows}, {"summaries", sums}};
}

} // namespace plankb::search

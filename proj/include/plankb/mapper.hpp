#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "plankb/kg.hpp"
#include "plankb/pddl.hpp"
#include "plankb/select.hpp"
#include "plankb/strips.hpp"

namespace plankb::mapper {

// ---------------------------------------------------------------------------
// IRI minting. Names are lowercased PDDL identifiers; domain-scoped so two
// domains may both define `move`.

kg::Iri domain_iri(std::string_view domain);
kg::Iri requirement_iri(std::string_view requirement);
kg::Iri type_iri(std::string_view domain, std::string_view type);
kg::Iri predicate_iri(std::string_view domain, std::string_view predicate);
kg::Iri constant_iri(std::string_view domain, std::string_view constant);
kg::Iri action_iri(std::string_view domain, std::string_view action);
kg::Iri parameter_iri(std::string_view domain, std::string_view action, std::string_view variable);
kg::Iri precondition_iri(std::string_view domain, std::string_view action);
kg::Iri effect_iri(std::string_view domain, std::string_view action, bool add);
kg::Iri problem_iri(std::string_view domain, std::string_view problem);
kg::Iri object_iri(std::string_view domain, std::string_view problem, std::string_view object);
kg::Iri state_iri(std::string_view domain, std::string_view problem, bool initial);
kg::Iri plan_iri(std::string_view domain, std::string_view problem, std::string_view planner);
kg::Iri planner_iri(std::string_view planner);
kg::Iri planner_type_iri(std::string_view type);
kg::Iri relevance_iri(select::Relevance tier);
kg::Iri record_iri(std::string_view planner, std::string_view domain);
kg::Iri macro_iri(std::string_view domain, std::string_view macro);

/// Local part after the ontology namespace's '#'.
std::string local_name(const kg::Iri &iri);

// ---------------------------------------------------------------------------
// PDDL artifacts to triples

std::vector<kg::Triple> map_domain(const pddl::DomainDef &domain);

/// Rebuilds a domain from its mapped description. Declaration order is not
/// stored, so actions and literals come back sorted.
pddl::DomainDef domain_from_graph(const kg::Graph &graph, const kg::Iri &domain);

/// The problem's domain must already be mapped into `graph` (UnknownDomain).
std::vector<kg::Triple> map_problem(const kg::Graph &graph, const pddl::ProblemDef &problem);

/// Plan node, cost, generator link and one ordinal-indexed step node per
/// action. `problem` must be a mapped PlanningProblem (UnknownDomain).
std::vector<kg::Triple> map_plan(const kg::Graph &graph, const strips::Plan &plan,
                                 const kg::Iri &problem, const kg::Iri &planner);

struct PlannerInfo {
    std::string name;
    std::string type;
    std::vector<std::string> requirements;
};

/// Reads `planner,type,requirements` CSV; requirements are ';'-separated.
std::vector<PlannerInfo> read_planner_catalog(std::string_view text);

/// One performance record per row plus Planner nodes; planners present in
/// `catalog` also get ofPlannerType / solvesRequirement links.
std::vector<kg::Triple> map_ipc_results(const std::vector<select::PlannerRecord> &rows,
                                        const std::vector<PlannerInfo> &catalog = {});

/// Plan step as recovered from a graph: schema name and argument objects.
struct StepText {
    std::string action;
    std::vector<std::string> args;
    friend auto operator<=>(const StepText &, const StepText &) = default;
};

/// Steps of a mapped plan ordered by their ordinal.
std::vector<StepText> plan_steps(const kg::Graph &graph, const kg::Iri &plan);

// ---------------------------------------------------------------------------
// JSON interchange

struct PlanRecord {
    std::string problem;
    std::string planner;
    strips::Plan plan;
    friend bool operator==(const PlanRecord &, const PlanRecord &) = default;
};

struct Bundle {
    pddl::DomainDef domain;
    std::vector<pddl::ProblemDef> problems;
    std::vector<PlanRecord> plans;
    friend bool operator==(const Bundle &, const Bundle &) = default;
};

nlohmann::json to_json(const Bundle &bundle);
/// Validates structure and re-checks the content against the STRIPS rules;
/// throws JsonSchemaError on any mismatch.
Bundle from_json(const nlohmann::json &json);

/// Domain, problems and plans of a bundle as one graph.
kg::Graph map_bundle(const Bundle &bundle);

// ---------------------------------------------------------------------------
// Competency questions

struct CompetencyQuery {
    std::string id;
    std::string question;
    std::vector<std::string> parameters;
};

const std::vector<CompetencyQuery> &competency_queries();
const CompetencyQuery &competency(std::string_view id);

using QueryArgs = std::map<std::string, std::string>;
using QueryEvaluator = std::function<std::vector<kg::Binding>(const kg::Graph &, const kg::Query &)>;

/// The BGP behind a question. Argument values are PDDL names (or `<iri>`).
kg::Query competency_bgp(std::string_view id, const QueryArgs &args);

/// Evaluates the question with `evaluator` (the store's engine by default).
/// C4 additionally filters facts against the caller's pattern, where `?x`
/// matches any single object consistently.
std::vector<kg::Binding> run_competency(const kg::Graph &graph, std::string_view id,
                                        const QueryArgs &args,
                                        const QueryEvaluator &evaluator = {});

/// True if ground fact text `(p a b)` matches pattern `(p ?x b)`.
bool fact_matches(std::string_view pattern, std::string_view fact);

} // namespace plankb::mapper

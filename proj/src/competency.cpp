#include <algorithm>
#include <sstream>

#include "plankb/errors.hpp"
#include "plankb/mapper.hpp"

namespace plankb::mapper {

using kg::Iri;
using kg::TriplePattern;
using kg::var;
namespace v = kg::vocab;

const std::vector<CompetencyQuery> &competency_queries() {
    static const std::vector<CompetencyQuery> queries = {
        {"C1", "What are the different types of planners used in automated planning?", {}},
        {"C2", "What is the relevance of planners in a given problem domain?", {"planner", "domain"}},
        {"C3", "What are the available actions for a given domain?", {"domain"}},
        {"C4", "What problems in a domain satisfy a given condition?", {"domain", "fact", "state"}},
        {"C5", "What are all the requirements a given domain has?", {"domain"}},
        {"C6", "What is the cost associated with generating a plan for a given problem?",
         {"domain", "problem"}},
        {"C7", "How many parameters does a specific action have?", {"domain", "action"}},
        {"C8", "What planning type does a specific planner belong to?", {"planner"}},
        {"C9", "What requirements does a given planner support?", {"planner"}},
        {"C10", "What are the different parameter types present in a domain?", {"domain"}},
    };
    return queries;
}

const CompetencyQuery &competency(std::string_view id) {
    for (const CompetencyQuery &q : competency_queries())
        if (q.id == id)
            return q;
    throw UnknownQueryId("'" + std::string(id) + "' (expected C1..C10)");
}

namespace {

std::string arg(const QueryArgs &args, std::string_view id, const std::string &name) {
    auto it = args.find(name);
    if (it == args.end() || it->second.empty())
        throw MissingQueryArgument(std::string(id) + " needs argument '" + name + "'");
    return it->second;
}

bool is_raw_iri(const std::string &s) {
    return s.size() > 2 && s.front() == '<' && s.back() == '>';
}

Iri resolve(const std::string &value, const std::function<Iri(const std::string &)> &mint) {
    return is_raw_iri(value) ? Iri{value.substr(1, value.size() - 2)} : mint(value);
}

std::vector<std::string> fact_tokens(std::string_view text) {
    std::string s(text);
    std::replace(s.begin(), s.end(), '(', ' ');
    std::replace(s.begin(), s.end(), ')', ' ');
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string tok; in >> tok;)
        out.push_back(tok);
    return out;
}

} // namespace

bool fact_matches(std::string_view pattern, std::string_view fact) {
    const std::vector<std::string> p = fact_tokens(pattern), f = fact_tokens(fact);
    if (p.size() != f.size())
        return false;
    std::map<std::string, std::string> bound;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i].size() > 1 && p[i].front() == '?') {
            auto [it, inserted] = bound.emplace(p[i], f[i]);
            if (!inserted && it->second != f[i])
                return false;
        } else if (p[i] != f[i]) {
            return false;
        }
    }
    return true;
}

kg::Query competency_bgp(std::string_view id, const QueryArgs &args) {
    const CompetencyQuery &q = competency(id);
    auto domain = [&] { return resolve(arg(args, id, "domain"), [](auto &s) { return domain_iri(s); }); };
    auto planner = [&] {
        return resolve(arg(args, id, "planner"), [](auto &s) { return planner_iri(s); });
    };
    auto pattern = [](kg::Term s, kg::Term p, kg::Term o) { return TriplePattern{s, p, o}; };

    kg::Query out;
    if (q.id == "C1") {
        out.where = {pattern(var("type"), v::type(), v::PlannerType())};
        out.select = {"type"};
        out.distinct = true;
    } else if (q.id == "C2") {
        out.where = {pattern(var("record"), v::forPlanner(), planner()),
                     pattern(var("record"), v::hasDomain(), domain()),
                     pattern(var("record"), v::hasRelevance(), var("relevance")),
                     pattern(var("record"), v::hasSolvedPercentage(), var("percentage"))};
        out.select = {"relevance", "percentage"};
    } else if (q.id == "C3") {
        out.where = {pattern(domain(), v::hasAction(), var("action"))};
        out.select = {"action"};
    } else if (q.id == "C4") {
        (void)arg(args, id, "fact");
        auto state = args.find("state");
        const std::string which = state == args.end() ? "goal" : state->second;
        if (which != "goal" && which != "init")
            throw MissingQueryArgument("C4 argument 'state' must be 'init' or 'goal'");
        out.where = {pattern(domain(), v::hasProblem(), var("problem")),
                     pattern(var("problem"), which == "goal" ? v::hasGoalState() : v::hasInitialState(),
                             var("state")),
                     pattern(var("state"), v::fact(), var("fact"))};
        out.select = {"problem", "fact"};
    } else if (q.id == "C5") {
        out.where = {pattern(domain(), v::hasRequirement(), var("requirement"))};
        out.select = {"requirement"};
    } else if (q.id == "C6") {
        const std::string d = arg(args, id, "domain");
        const Iri problem =
            resolve(arg(args, id, "problem"), [&](auto &s) { return problem_iri(d, s); });
        out.where = {pattern(problem, v::hasPlan(), var("plan")),
                     pattern(var("plan"), v::hasPlanCost(), var("cost"))};
        out.select = {"plan", "cost"};
    } else if (q.id == "C7") {
        const std::string d = arg(args, id, "domain");
        const Iri action = resolve(arg(args, id, "action"), [&](auto &s) { return action_iri(d, s); });
        out.where = {pattern(action, v::hasParameter(), var("parameter"))};
        out.select = {"parameter"};
        out.distinct = true;
        out.count_as = "count";
    } else if (q.id == "C8") {
        out.where = {pattern(planner(), v::ofPlannerType(), var("type"))};
        out.select = {"type"};
    } else if (q.id == "C9") {
        out.where = {pattern(planner(), v::solvesRequirement(), var("requirement"))};
        out.select = {"requirement"};
    } else {
        out.where = {pattern(domain(), v::hasParameterType(), var("type"))};
        out.select = {"type"};
        out.distinct = true;
    }
    return out;
}

std::vector<kg::Binding> run_competency(const kg::Graph &graph, std::string_view id,
                                        const QueryArgs &args, const QueryEvaluator &evaluator) {
    const kg::Query bgp = competency_bgp(id, args);
    std::vector<kg::Binding> rows =
        evaluator ? evaluator(graph, bgp) : kg::query(graph, bgp);
    if (competency(id).id != "C4")
        return rows;

    const std::string pattern = args.at("fact");
    std::vector<kg::Binding> out;
    for (const kg::Binding &row : rows) {
        const auto *fact = std::get_if<kg::Literal>(&row.at("fact"));
        if (fact != nullptr && fact_matches(pattern, fact->lexical))
            out.push_back(kg::Binding{{"problem", row.at("problem")}});
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace plankb::mapper

#include <algorithm>

#include "plankb/kg.hpp"

namespace plankb::kg {

namespace vocab {

Iri type() { return rdf("type"); }
Iri label() { return Iri{std::string(kRdfsNs) + "label"}; }

#define PLANKB_TERM(name) \
    Iri name() { return onto(#name); }

PLANKB_TERM(PlanningDomain)
PLANKB_TERM(DomainRequirement)
PLANKB_TERM(ParameterType)
PLANKB_TERM(DomainPredicate)
PLANKB_TERM(DomainConstant)
PLANKB_TERM(Action)
PLANKB_TERM(ActionPrecondition)
PLANKB_TERM(ActionEffect)
PLANKB_TERM(Parameter)
PLANKB_TERM(PlanningProblem)
PLANKB_TERM(ProblemObject)
PLANKB_TERM(State)
PLANKB_TERM(InitialState)
PLANKB_TERM(GoalState)
PLANKB_TERM(Plan)
PLANKB_TERM(Planner)
PLANKB_TERM(PlannerType)
PLANKB_TERM(MacroAction)
PLANKB_TERM(PlanningTask)

PLANKB_TERM(hasAction)
PLANKB_TERM(hasPredicate)
PLANKB_TERM(hasRequirement)
PLANKB_TERM(hasEffect)
PLANKB_TERM(hasPrecondition)
PLANKB_TERM(addsPredicate)
PLANKB_TERM(deletesPredicate)
PLANKB_TERM(hasParameter)
PLANKB_TERM(hasParameterType)
PLANKB_TERM(hasGoalState)
PLANKB_TERM(hasInitialState)
PLANKB_TERM(hasObject)
PLANKB_TERM(hasPlan)
PLANKB_TERM(hasPlanCost)
PLANKB_TERM(isGeneratedBy)
PLANKB_TERM(ofPlannerType)
PLANKB_TERM(solvesRequirement)
PLANKB_TERM(hasRelevance)
PLANKB_TERM(hasDomain)
PLANKB_TERM(hasProblem)
PLANKB_TERM(hasActionStep)
PLANKB_TERM(hasMacro)
PLANKB_TERM(hasSolvedPercentage)
PLANKB_TERM(hasActionName)
PLANKB_TERM(hasExplanation)

PLANKB_TERM(position)
PLANKB_TERM(fact)
PLANKB_TERM(literalText)
PLANKB_TERM(polarity)
PLANKB_TERM(parentType)
PLANKB_TERM(arity)
PLANKB_TERM(ofAction)
PLANKB_TERM(forPlanner)
PLANKB_TERM(solvedCount)
PLANKB_TERM(totalCount)
PLANKB_TERM(firstAction)
PLANKB_TERM(secondAction)
PLANKB_TERM(frequency)
PLANKB_TERM(unifier)

#undef PLANKB_TERM

} // namespace vocab

OntologySchema::OntologySchema() {
    using namespace vocab;
    classes_ = {PlanningDomain(), DomainRequirement(), ParameterType(), DomainPredicate(),
                DomainConstant(), Action(),           ActionPrecondition(), ActionEffect(),
                Parameter(),      PlanningProblem(),  ProblemObject(),  State(),
                InitialState(),   GoalState(),        Plan(),           Planner(),
                PlannerType(),    MacroAction(),      PlanningTask()};
    properties_ = {hasAction(),       hasPredicate(),     hasRequirement(),   hasEffect(),
                   hasPrecondition(), addsPredicate(),    deletesPredicate(), hasParameter(),
                   hasParameterType(), hasGoalState(),    hasInitialState(),  hasObject(),
                   hasPlan(),         hasPlanCost(),      isGeneratedBy(),    ofPlannerType(),
                   solvesRequirement(), hasRelevance(),   hasDomain(),        hasProblem(),
                   hasActionStep(),   hasMacro(),         hasSolvedPercentage(), hasActionName(),
                   hasExplanation()};
    auxiliary_ = {position(),   fact(),        literalText(), polarity(),  parentType(),
                  arity(),      ofAction(),    forPlanner(),  solvedCount(), totalCount(),
                  firstAction(), secondAction(), frequency(), unifier()};
}

const OntologySchema &OntologySchema::instance() {
    static const OntologySchema schema;
    return schema;
}

std::vector<Triple> OntologySchema::triples() const {
    const Iri owl_class{std::string(kOwlNs) + "Class"};
    const Iri owl_object_property{std::string(kOwlNs) + "ObjectProperty"};
    const Iri owl_datatype_property{std::string(kOwlNs) + "DatatypeProperty"};
    const Iri subclass_of{std::string(kRdfsNs) + "subClassOf"};
    std::vector<Triple> out;
    for (const Iri &c : classes_)
        out.push_back({c, vocab::type(), owl_class});
    for (const Iri &p : properties_)
        out.push_back({p, vocab::type(), owl_object_property});
    for (const Iri &p : auxiliary_)
        out.push_back({p, vocab::type(), owl_datatype_property});
    out.push_back({vocab::InitialState(), subclass_of, vocab::State()});
    out.push_back({vocab::GoalState(), subclass_of, vocab::State()});
    return out;
}

std::vector<AxiomViolation> validate_axioms(const Graph &g, ValidationMode mode) {
    using namespace vocab;
    std::vector<AxiomViolation> out;
    auto instances = [&](const Iri &cls) { return g.subjects(type(), cls); };
    auto count = [&](const Iri &s, const Iri &p) { return g.objects(s, p).size(); };
    auto at_least_one = [&](int axiom, const Iri &cls, const Iri &prop, std::string_view what) {
        for (const Iri &x : instances(cls))
            if (count(x, prop) == 0)
                out.push_back({axiom, x, std::string(what)});
    };
    auto exactly_one = [&](int axiom, const Iri &cls, const Iri &prop, std::string_view what) {
        for (const Iri &x : instances(cls)) {
            std::size_t n = count(x, prop);
            if (n != 1)
                out.push_back({axiom, x,
                               std::string(what) + " (found " + std::to_string(n) + ")"});
        }
    };

    at_least_one(1, PlanningDomain(), hasAction(), "PlanningDomain has no hasAction");
    at_least_one(2, PlanningDomain(), hasPredicate(), "PlanningDomain has no hasPredicate");
    at_least_one(3, PlanningDomain(), hasRequirement(), "PlanningDomain has no hasRequirement");
    at_least_one(4, Action(), hasEffect(), "Action has no hasEffect");

    for (const Iri &effect : instances(ActionEffect())) {
        if (count(effect, addsPredicate()) + count(effect, deletesPredicate()) > 0)
            continue;
        const std::vector<Term> claims = g.objects(effect, polarity());
        bool add = std::find(claims.begin(), claims.end(), Term{string_literal("add")}) != claims.end();
        bool del =
            std::find(claims.begin(), claims.end(), Term{string_literal("delete")}) != claims.end();
        if (add || !del)
            out.push_back({5, effect, "ActionEffect has no addsPredicate"});
        if (del || !add)
            out.push_back({6, effect, "ActionEffect has no deletesPredicate"});
    }

    exactly_one(7, PlanningProblem(), hasGoalState(), "PlanningProblem needs exactly one hasGoalState");
    exactly_one(8, PlanningProblem(), hasInitialState(),
                "PlanningProblem needs exactly one hasInitialState");
    at_least_one(9, PlanningProblem(), hasObject(), "PlanningProblem has no hasObject");
    if (mode == ValidationMode::post_solve)
        at_least_one(10, PlanningProblem(), hasPlan(), "PlanningProblem has no hasPlan");

    for (const Iri &plan : instances(Plan())) {
        const std::vector<Term> costs = g.objects(plan, hasPlanCost());
        if (costs.size() != 1) {
            out.push_back({11, plan, "Plan needs exactly one hasPlanCost (found " +
                                         std::to_string(costs.size()) + ")"});
        } else if (!as_count(costs.front())) {
            out.push_back({11, plan, "hasPlanCost " + to_string(costs.front()) +
                                         " is not a non-negative integer"});
        }
    }
    at_least_one(12, Plan(), isGeneratedBy(), "Plan has no isGeneratedBy");
    at_least_one(13, Planner(), ofPlannerType(), "Planner has no ofPlannerType");
    at_least_one(13, Planner(), solvesRequirement(), "Planner has no solvesRequirement");

    std::sort(out.begin(), out.end());
    return out;
}

} // namespace plankb::kg

#include "plankb/mapper.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "plankb/errors.hpp"

namespace plankb::mapper {

using kg::Iri;
using kg::Triple;
namespace v = kg::vocab;

namespace {

bool mintable(std::string_view name) {
    if (name.empty())
        return false;
    return std::all_of(name.begin(), name.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '_' ||
               c == '.';
    });
}

std::string part(std::string_view name) {
    if (!name.empty() && name.front() == '?')
        name.remove_prefix(1);
    if (!mintable(name))
        throw MappingError("identifier '" + std::string(name) + "' cannot be minted into an IRI");
    return std::string(name);
}

Iri mint(std::initializer_list<std::string_view> parts) {
    std::string local;
    bool first = true;
    for (std::string_view p : parts) {
        if (!first)
            local += '-';
        local += first ? std::string(p) : part(p);
        first = false;
    }
    return kg::onto(local);
}

Triple typed(const Iri &s, const Iri &cls) { return {s, v::type(), cls}; }
Triple labelled(const Iri &s, std::string_view text) {
    return {s, v::label(), kg::string_literal(std::string(text))};
}

std::string first_label(const kg::Graph &g, const Iri &node) {
    for (const kg::Term &t : g.objects(node, v::label()))
        if (const auto *lit = std::get_if<kg::Literal>(&t))
            return lit->lexical;
    return {};
}

} // namespace

Iri domain_iri(std::string_view d) { return mint({"domain", d}); }
Iri requirement_iri(std::string_view r) { return mint({"requirement", r}); }
Iri type_iri(std::string_view d, std::string_view t) { return mint({"type", d, t}); }
Iri predicate_iri(std::string_view d, std::string_view p) { return mint({"predicate", d, p}); }
Iri constant_iri(std::string_view d, std::string_view c) { return mint({"constant", d, c}); }
Iri action_iri(std::string_view d, std::string_view a) { return mint({"action", d, a}); }
Iri parameter_iri(std::string_view d, std::string_view a, std::string_view var) {
    return mint({"parameter", d, a, var});
}
Iri precondition_iri(std::string_view d, std::string_view a) { return mint({"precondition", d, a}); }
Iri effect_iri(std::string_view d, std::string_view a, bool add) {
    return mint({"effect", d, a, add ? "add" : "del"});
}
Iri problem_iri(std::string_view d, std::string_view p) { return mint({"problem", d, p}); }
Iri object_iri(std::string_view d, std::string_view p, std::string_view o) {
    return mint({"object", d, p, o});
}
Iri state_iri(std::string_view d, std::string_view p, bool initial) {
    return mint({"state", d, p, initial ? "init" : "goal"});
}
Iri plan_iri(std::string_view d, std::string_view p, std::string_view planner) {
    return mint({"plan", d, p, planner});
}
Iri planner_iri(std::string_view planner) { return mint({"planner", planner}); }
Iri planner_type_iri(std::string_view type) { return mint({"plannertype", type}); }
Iri relevance_iri(select::Relevance tier) { return mint({"relevance", select::to_string(tier)}); }
Iri record_iri(std::string_view planner, std::string_view d) {
    return mint({"performance", planner, d});
}
Iri macro_iri(std::string_view d, std::string_view m) { return mint({"macro", d, m}); }

std::string local_name(const Iri &iri) {
    auto cut = iri.value.find_last_of("#/");
    return cut == std::string::npos ? iri.value : iri.value.substr(cut + 1);
}

// ---------------------------------------------------------------------------

std::vector<Triple> map_domain(const pddl::DomainDef &d) {
    if (auto issues = pddl::validate_domain(d); !issues.empty())
        throw MappingError(issues.front().location + ": " + issues.front().detail);
    const std::string &dn = d.name;
    const Iri D = domain_iri(dn);
    std::vector<Triple> out{typed(D, v::PlanningDomain()), labelled(D, dn)};

    std::set<std::string> requirements = d.requirements;
    if (requirements.empty())
        requirements.insert("strips"); // the implicit PDDL default
    for (const std::string &r : requirements) {
        const Iri R = requirement_iri(r);
        out.push_back({D, v::hasRequirement(), R});
        out.push_back(typed(R, v::DomainRequirement()));
        out.push_back(labelled(R, ":" + r));
    }

    // Parameter types: every declared type, plus `object` when used directly.
    std::set<std::string> used_types;
    for (const pddl::TypeName &t : d.types)
        used_types.insert(t.name);
    auto note_type = [&](const std::string &t) {
        if (t == pddl::kObjectType)
            used_types.insert(t);
    };
    for (const auto &c : d.constants)
        note_type(c.type);
    for (const auto &a : d.actions)
        for (const auto &p : a.params)
            note_type(p.type);
    for (const auto &p : d.predicates)
        for (const auto &param : p.params)
            note_type(param.type);
    for (const std::string &t : used_types) {
        const Iri T = type_iri(dn, t);
        out.push_back({D, v::hasParameterType(), T});
        out.push_back(typed(T, v::ParameterType()));
        out.push_back(labelled(T, t));
    }
    for (const pddl::TypeName &t : d.types)
        if (t.parent != pddl::kObjectType)
            out.push_back({type_iri(dn, t.name), v::parentType(), type_iri(dn, t.parent)});

    for (const pddl::PredicateSchema &p : d.predicates) {
        const Iri P = predicate_iri(dn, p.name);
        out.push_back({D, v::hasPredicate(), P});
        out.push_back(typed(P, v::DomainPredicate()));
        out.push_back(labelled(P, p.name));
        out.push_back({P, v::arity(), kg::count_literal(p.arity())});
        std::string signature = "(" + p.name;
        for (const pddl::TypedName &param : p.params)
            signature += " " + param.name + " - " + param.type;
        out.push_back({P, v::literalText(), kg::string_literal(signature + ")")});
    }

    for (const pddl::TypedName &c : d.constants) {
        const Iri C = constant_iri(dn, c.name);
        out.push_back({D, v::hasObject(), C});
        out.push_back(typed(C, v::DomainConstant()));
        out.push_back(labelled(C, c.name));
        out.push_back({C, v::hasParameterType(), type_iri(dn, c.type)});
    }

    for (const pddl::ActionSchema &a : d.actions) {
        if (a.add.empty() && a.del.empty())
            throw MappingError("action " + a.name + " has no effect");
        const Iri A = action_iri(dn, a.name);
        out.push_back({D, v::hasAction(), A});
        out.push_back(typed(A, v::Action()));
        out.push_back(labelled(A, a.name));
        for (std::size_t i = 0; i < a.params.size(); ++i) {
            const Iri X = parameter_iri(dn, a.name, a.params[i].name);
            out.push_back({A, v::hasParameter(), X});
            out.push_back(typed(X, v::Parameter()));
            out.push_back(labelled(X, a.params[i].name));
            out.push_back({X, v::position(), kg::count_literal(i + 1)});
            out.push_back({X, v::hasParameterType(), type_iri(dn, a.params[i].type)});
        }

        const Iri Pre = precondition_iri(dn, a.name);
        out.push_back({A, v::hasPrecondition(), Pre});
        out.push_back(typed(Pre, v::ActionPrecondition()));
        for (const pddl::Literal &l : a.precondition) {
            out.push_back({Pre, v::literalText(), kg::string_literal(pddl::to_string(l))});
            if (!l.atom.is_equality())
                out.push_back({Pre, v::hasPredicate(), predicate_iri(dn, l.atom.predicate)});
        }

        auto effect = [&](bool add, const std::vector<pddl::Atom> &atoms) {
            if (atoms.empty())
                return;
            const Iri E = effect_iri(dn, a.name, add);
            out.push_back({A, v::hasEffect(), E});
            out.push_back(typed(E, v::ActionEffect()));
            out.push_back({E, v::polarity(), kg::string_literal(add ? "add" : "delete")});
            for (const pddl::Atom &atom : atoms) {
                out.push_back({E, add ? v::addsPredicate() : v::deletesPredicate(),
                               predicate_iri(dn, atom.predicate)});
                out.push_back({E, v::literalText(),
                               kg::string_literal(add ? pddl::to_string(atom)
                                                      : "(not " + pddl::to_string(atom) + ")")});
            }
        };
        effect(true, a.add);
        effect(false, a.del);
    }

    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

std::vector<std::string> literal_texts(const kg::Graph &g, const Iri &node, const Iri &prop) {
    std::vector<std::string> out;
    for (const kg::Term &t : g.objects(node, prop))
        if (const auto *lit = std::get_if<kg::Literal>(&t))
            out.push_back(lit->lexical);
    return out;
}

std::vector<Iri> iri_objects(const kg::Graph &g, const Iri &node, const Iri &prop) {
    std::vector<Iri> out;
    for (const kg::Term &t : g.objects(node, prop))
        if (const auto *iri = std::get_if<Iri>(&t))
            out.push_back(*iri);
    return out;
}

} // namespace

pddl::DomainDef domain_from_graph(const kg::Graph &g, const Iri &D) {
    if (!g.contains(typed(D, v::PlanningDomain())))
        throw UnknownDomain("<" + D.value + "> is not a mapped PlanningDomain");
    const std::string dn = first_label(g, D);
    std::ostringstream pddl;
    pddl << "(define (domain " << dn << ")\n  (:requirements";
    for (const Iri &r : iri_objects(g, D, v::hasRequirement()))
        pddl << ' ' << first_label(g, r);
    pddl << ")\n  (:types";
    for (const Iri &t : iri_objects(g, D, v::hasParameterType())) {
        const std::string name = first_label(g, t);
        if (name == pddl::kObjectType)
            continue;
        auto parents = iri_objects(g, t, v::parentType());
        pddl << ' ' << name << " - "
             << (parents.empty() ? std::string(pddl::kObjectType) : first_label(g, parents.front()));
    }
    pddl << ")\n  (:constants";
    for (const Iri &c : iri_objects(g, D, v::hasObject())) {
        auto types = iri_objects(g, c, v::hasParameterType());
        if (types.size() != 1)
            throw MappingError("constant <" + c.value + "> needs exactly one type");
        pddl << ' ' << first_label(g, c) << " - " << first_label(g, types.front());
    }
    pddl << ")\n  (:predicates";
    for (const Iri &p : iri_objects(g, D, v::hasPredicate())) {
        auto sig = literal_texts(g, p, v::literalText());
        if (sig.size() != 1)
            throw MappingError("predicate <" + p.value + "> lacks its signature");
        pddl << ' ' << sig.front();
    }
    pddl << ")\n";
    for (const Iri &a : iri_objects(g, D, v::hasAction())) {
        std::vector<std::pair<std::uint64_t, std::string>> params;
        for (const Iri &x : iri_objects(g, a, v::hasParameter())) {
            auto pos = g.objects(x, v::position());
            auto types = iri_objects(g, x, v::hasParameterType());
            if (pos.size() != 1 || !kg::as_count(pos.front()) || types.size() != 1)
                throw MappingError("parameter <" + x.value + "> is malformed");
            params.emplace_back(*kg::as_count(pos.front()),
                                first_label(g, x) + " - " + first_label(g, types.front()));
        }
        std::sort(params.begin(), params.end());
        pddl << "  (:action " << first_label(g, a) << "\n    :parameters (";
        for (std::size_t i = 0; i < params.size(); ++i)
            pddl << (i ? " " : "") << params[i].second;
        pddl << ")\n    :precondition (and";
        for (const Iri &pre : iri_objects(g, a, v::hasPrecondition()))
            for (const std::string &l : literal_texts(g, pre, v::literalText()))
                pddl << ' ' << l;
        pddl << ")\n    :effect (and";
        for (const Iri &e : iri_objects(g, a, v::hasEffect()))
            for (const std::string &l : literal_texts(g, e, v::literalText()))
                pddl << ' ' << l;
        pddl << "))\n";
    }
    pddl << ")\n";
    try {
        return pddl::parse_domain(pddl.str());
    } catch (const Error &e) {
        throw MappingError("graph description of " + dn + " is not a valid domain: " + e.what());
    }
}

std::vector<Triple> map_problem(const kg::Graph &g, const pddl::ProblemDef &p) {
    const std::string &dn = p.domain_name;
    const Iri D = domain_iri(dn);
    if (!g.contains(typed(D, v::PlanningDomain())))
        throw UnknownDomain("domain '" + dn + "' of problem '" + p.name + "' is not mapped");
    const Iri P = problem_iri(dn, p.name);
    std::vector<Triple> out{typed(P, v::PlanningProblem()), labelled(P, p.name),
                            {P, v::hasDomain(), D}, {D, v::hasProblem(), P}};
    for (const pddl::TypedName &o : p.objects) {
        const Iri O = object_iri(dn, p.name, o.name);
        out.push_back({P, v::hasObject(), O});
        out.push_back(typed(O, v::ProblemObject()));
        out.push_back(labelled(O, o.name));
        out.push_back({O, v::hasParameterType(), type_iri(dn, o.type)});
    }
    const Iri I = state_iri(dn, p.name, true);
    out.push_back({P, v::hasInitialState(), I});
    out.push_back(typed(I, v::InitialState()));
    for (const pddl::Atom &a : p.init)
        out.push_back({I, v::fact(), kg::string_literal(pddl::to_string(a))});
    const Iri G = state_iri(dn, p.name, false);
    out.push_back({P, v::hasGoalState(), G});
    out.push_back(typed(G, v::GoalState()));
    for (const pddl::Literal &l : p.goal)
        out.push_back({G, v::fact(), kg::string_literal(pddl::to_string(l))});
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Triple> map_plan(const kg::Graph &g, const strips::Plan &plan, const Iri &problem,
                             const Iri &planner) {
    if (!g.contains(typed(problem, v::PlanningProblem())))
        throw UnknownDomain("problem <" + problem.value + "> is not mapped");
    const std::vector<kg::Term> domains = g.objects(problem, v::hasDomain());
    if (domains.size() != 1 || !std::holds_alternative<Iri>(domains.front()))
        throw UnknownDomain("problem <" + problem.value + "> has no unique domain");
    const Iri D = std::get<Iri>(domains.front());
    const std::string dn = first_label(g, D);
    const std::string pn = first_label(g, problem);
    if (dn.empty() || pn.empty())
        throw UnknownDomain("problem <" + problem.value + "> lacks domain or problem labels");

    std::string planner_name = local_name(planner);
    if (planner_name.rfind("planner-", 0) == 0)
        planner_name.erase(0, 8);
    const Iri PL = plan_iri(dn, pn, planner_name);
    std::vector<Triple> out{typed(PL, v::Plan()),
                            {problem, v::hasPlan(), PL},
                            {PL, v::isGeneratedBy(), planner},
                            {PL, v::hasPlanCost(), kg::count_literal(plan.cost)}};
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        const strips::GroundAction &step = plan.steps[i];
        const Iri S{PL.value + "-step-" + std::to_string(i + 1)};
        out.push_back({PL, v::hasActionStep(), S});
        out.push_back({S, v::position(), kg::count_literal(i + 1)});
        out.push_back({S, v::hasActionName(), kg::string_literal(step.to_string())});
        out.push_back({S, v::ofAction(), action_iri(dn, step.schema)});
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<StepText> plan_steps(const kg::Graph &g, const Iri &plan) {
    std::vector<std::pair<std::uint64_t, StepText>> steps;
    for (const kg::Term &t : g.objects(plan, v::hasActionStep())) {
        const auto *step = std::get_if<Iri>(&t);
        if (step == nullptr)
            continue;
        auto positions = g.objects(*step, v::position());
        auto names = g.objects(*step, v::hasActionName());
        if (positions.size() != 1 || names.size() != 1)
            throw MappingError("step <" + step->value + "> needs one position and one name");
        auto pos = kg::as_count(positions.front());
        const auto *text = std::get_if<kg::Literal>(&names.front());
        if (!pos || text == nullptr)
            throw MappingError("step <" + step->value + "> is malformed");
        std::string s = text->lexical;
        std::replace(s.begin(), s.end(), '(', ' ');
        std::replace(s.begin(), s.end(), ')', ' ');
        std::istringstream in(s);
        StepText st;
        in >> st.action;
        for (std::string arg; in >> arg;)
            st.args.push_back(arg);
        if (st.action.empty())
            throw MappingError("step <" + step->value + "> has an empty action name");
        steps.emplace_back(*pos, std::move(st));
    }
    std::sort(steps.begin(), steps.end());
    std::vector<StepText> out;
    out.reserve(steps.size());
    for (auto &[pos, st] : steps)
        out.push_back(std::move(st));
    return out;
}

// ---------------------------------------------------------------------------

std::vector<PlannerInfo> read_planner_catalog(std::string_view text) {
    std::vector<PlannerInfo> out;
    std::istringstream in{std::string(text)};
    std::string line;
    bool header = false;
    std::size_t line_no = 0;
    auto trim = [](std::string s) {
        auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
        while (!s.empty() && ws(s.back()))
            s.pop_back();
        while (!s.empty() && ws(s.front()))
            s.erase(s.begin());
        std::transform(s.begin(), s.end(), s.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        return s;
    };
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#')
            continue;
        std::vector<std::string> cols;
        std::istringstream row(line);
        for (std::string col; std::getline(row, col, ',');)
            cols.push_back(trim(col));
        if (!header) {
            if (cols != std::vector<std::string>{"planner", "type", "requirements"})
                throw InvalidRecord("expected header 'planner,type,requirements'");
            header = true;
            continue;
        }
        if (cols.size() == 2)
            cols.emplace_back();
        if (cols.size() != 3 || cols[0].empty() || cols[1].empty())
            throw InvalidRecord("catalog line " + std::to_string(line_no) + " is malformed");
        PlannerInfo info{cols[0], cols[1], {}};
        std::istringstream reqs(cols[2]);
        for (std::string r; std::getline(reqs, r, ';');) {
            r = trim(r);
            if (!r.empty() && r.front() == ':')
                r.erase(0, 1);
            if (!r.empty())
                info.requirements.push_back(r);
        }
        out.push_back(std::move(info));
    }
    if (!header)
        throw InvalidRecord("expected header 'planner,type,requirements'");
    return out;
}

std::vector<Triple> map_ipc_results(const std::vector<select::PlannerRecord> &rows,
                                    const std::vector<PlannerInfo> &catalog) {
    std::vector<Triple> out;
    std::set<std::pair<std::string, std::string>> seen;
    std::set<std::string> planners;
    for (const select::PlannerRecord &r : rows) {
        select::check_record(r);
        if (!seen.emplace(r.planner, r.domain).second)
            throw InvalidRecord("duplicate record for (" + r.planner + ", " + r.domain + ")");
        planners.insert(r.planner);
        const Iri R = record_iri(r.planner, r.domain);
        const select::Relevance tier = select::relevance(r.solved, r.total);
        const std::uint64_t basis = (r.solved * 10000 + r.total / 2) / r.total;
        std::string frac = std::to_string(basis % 100);
        if (frac.size() < 2)
            frac.insert(0, "0");
        out.push_back(typed(R, v::PlanningTask()));
        out.push_back({R, v::forPlanner(), planner_iri(r.planner)});
        out.push_back({R, v::hasDomain(), domain_iri(r.domain)});
        out.push_back({R, v::hasSolvedPercentage(),
                       kg::decimal_literal(std::to_string(basis / 100) + "." + frac)});
        out.push_back({R, v::solvedCount(), kg::count_literal(r.solved)});
        out.push_back({R, v::totalCount(), kg::count_literal(r.total)});
        out.push_back({R, v::hasRelevance(), relevance_iri(tier)});
        out.push_back(labelled(relevance_iri(tier), select::to_string(tier)));
        out.push_back(labelled(domain_iri(r.domain), r.domain));
    }
    for (const PlannerInfo &info : catalog)
        planners.insert(info.name);
    for (const std::string &name : planners) {
        const Iri P = planner_iri(name);
        out.push_back(typed(P, v::Planner()));
        out.push_back(labelled(P, name));
    }
    for (const PlannerInfo &info : catalog) {
        const Iri P = planner_iri(info.name);
        const Iri T = planner_type_iri(info.type);
        out.push_back({P, v::ofPlannerType(), T});
        out.push_back(typed(T, v::PlannerType()));
        out.push_back(labelled(T, info.type));
        for (const std::string &r : info.requirements) {
            const Iri R = requirement_iri(r);
            out.push_back({P, v::solvesRequirement(), R});
            out.push_back(typed(R, v::DomainRequirement()));
            out.push_back(labelled(R, ":" + r));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

kg::Graph map_bundle(const Bundle &bundle) {
    kg::Graph g;
    g.insert_all(map_domain(bundle.domain));
    for (const pddl::ProblemDef &p : bundle.problems)
        g.insert_all(map_problem(g, p));
    for (const PlanRecord &rec : bundle.plans)
        g.insert_all(map_plan(g, rec.plan, problem_iri(bundle.domain.name, rec.problem),
                              planner_iri(rec.planner)));
    return g;
}

} // namespace plankb::mapper

#include "plankb/strips.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "plankb/errors.hpp"
#include "sexpr.hpp"

namespace plankb::strips {

std::string GroundAtom::to_string() const {
    std::string s = "(" + predicate;
    for (const std::string &a : args)
        s += " " + a;
    return s + ")";
}

GroundAtom ground_atom(const pddl::Atom &atom) { return GroundAtom{atom.predicate, atom.args}; }

State make_state(const std::vector<pddl::Atom> &atoms) {
    State s;
    for (const pddl::Atom &a : atoms)
        s.insert(ground_atom(a));
    return s;
}

std::string GroundAction::to_string() const {
    std::string s = "(" + schema;
    for (const auto &[var, obj] : binding)
        s += " " + obj;
    return s + ")";
}

std::vector<std::string> GroundAction::args() const {
    std::vector<std::string> out;
    out.reserve(binding.size());
    for (const auto &[var, obj] : binding)
        out.push_back(obj);
    return out;
}

Plan Plan::from_steps(std::vector<GroundAction> steps) {
    Plan p;
    p.steps = std::move(steps);
    for (const GroundAction &a : p.steps)
        p.cost += a.cost;
    return p;
}

namespace {

void sort_unique(std::vector<GroundAtom> &v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

GroundAtom substitute(const pddl::Atom &atom, const std::map<std::string, std::string> &binding) {
    GroundAtom g{atom.predicate, {}};
    g.args.reserve(atom.args.size());
    for (const std::string &t : atom.args) {
        if (pddl::is_variable(t)) {
            auto it = binding.find(t);
            g.args.push_back(it == binding.end() ? t : it->second);
        } else {
            g.args.push_back(t);
        }
    }
    return g;
}

/// Builds the ground action, or nullopt if an equality literal fails.
std::optional<GroundAction> build(const pddl::ActionSchema &schema,
                                  const std::vector<std::string> &args) {
    std::map<std::string, std::string> binding;
    GroundAction g;
    g.schema = schema.name;
    for (std::size_t i = 0; i < schema.params.size(); ++i) {
        binding[schema.params[i].name] = args[i];
        g.binding.emplace_back(schema.params[i].name, args[i]);
    }
    for (const pddl::Literal &l : schema.precondition) {
        GroundAtom atom = substitute(l.atom, binding);
        if (l.atom.is_equality()) {
            bool same = atom.args.size() == 2 && atom.args[0] == atom.args[1];
            if (same != l.positive)
                return std::nullopt;
            continue;
        }
        (l.positive ? g.pre_pos : g.pre_neg).push_back(std::move(atom));
    }
    for (const pddl::Atom &a : schema.add)
        g.add.push_back(substitute(a, binding));
    for (const pddl::Atom &a : schema.del)
        g.del.push_back(substitute(a, binding));
    sort_unique(g.pre_pos);
    sort_unique(g.pre_neg);
    sort_unique(g.add);
    sort_unique(g.del);
    // Distinct variables may collapse onto one object; add wins.
    std::erase_if(g.del, [&](const GroundAtom &a) {
        return std::binary_search(g.add.begin(), g.add.end(), a);
    });
    return g;
}

std::vector<pddl::TypedName> universe(const pddl::DomainDef &domain,
                                      const pddl::ProblemDef &problem) {
    std::vector<pddl::TypedName> all = problem.objects;
    for (const pddl::TypedName &c : domain.constants)
        if (std::none_of(all.begin(), all.end(),
                         [&](const pddl::TypedName &o) { return o.name == c.name; }))
            all.push_back(c);
    return all;
}

void check_pair(const pddl::DomainDef &domain, const pddl::ProblemDef &problem) {
    if (problem.domain_name != domain.name)
        throw DomainProblemMismatch("problem '" + problem.name + "' references domain '" +
                                    problem.domain_name + "', not '" + domain.name + "'");
}

} // namespace

std::vector<GroundAction> ground(const pddl::DomainDef &domain, const pddl::ProblemDef &problem) {
    check_pair(domain, problem);
    const std::vector<pddl::TypedName> objects = universe(domain, problem);

    std::vector<GroundAction> out;
    for (const pddl::ActionSchema &schema : domain.actions) {
        std::vector<std::vector<std::string>> candidates;
        for (const pddl::TypedName &param : schema.params) {
            std::vector<std::string> names;
            for (const pddl::TypedName &o : objects)
                if (domain.is_subtype(o.type, param.type))
                    names.push_back(o.name);
            std::sort(names.begin(), names.end());
            names.erase(std::unique(names.begin(), names.end()), names.end());
            candidates.push_back(std::move(names));
        }
        if (std::any_of(candidates.begin(), candidates.end(),
                        [](const auto &c) { return c.empty(); }))
            continue;

        // Odometer over the candidate lists, last parameter fastest.
        std::vector<std::size_t> index(candidates.size(), 0);
        std::vector<std::string> args(candidates.size());
        for (;;) {
            for (std::size_t i = 0; i < index.size(); ++i)
                args[i] = candidates[i][index[i]];
            if (auto g = build(schema, args))
                out.push_back(std::move(*g));
            bool wrapped = true;
            for (std::size_t pos = index.size(); pos-- > 0;) {
                if (++index[pos] < candidates[pos].size()) {
                    wrapped = false;
                    break;
                }
                index[pos] = 0;
            }
            if (wrapped)
                break;
        }
    }
    return out;
}

std::optional<GroundAction> instantiate(const pddl::DomainDef &domain,
                                        const pddl::ProblemDef &problem, std::string_view schema,
                                        const std::vector<std::string> &args) {
    check_pair(domain, problem);
    const pddl::ActionSchema *action = domain.find_action(schema);
    if (action == nullptr)
        throw UnknownAction("'" + std::string(schema) + "'");
    if (action->params.size() != args.size())
        throw ArityMismatch("action '" + action->name + "' takes " +
                            std::to_string(action->params.size()) + " argument(s), got " +
                            std::to_string(args.size()));
    const std::vector<pddl::TypedName> objects = universe(domain, problem);
    for (std::size_t i = 0; i < args.size(); ++i) {
        auto it = std::find_if(objects.begin(), objects.end(),
                               [&](const pddl::TypedName &o) { return o.name == args[i]; });
        if (it == objects.end())
            throw UnknownObject("'" + args[i] + "' in action '" + action->name + "'");
        if (!domain.is_subtype(it->type, action->params[i].type))
            throw TypeConflict("'" + args[i] + "' of type '" + it->type + "' bound to " +
                               action->params[i].name + " - " + action->params[i].type);
    }
    return build(*action, args);
}

std::optional<std::string> first_violation(const State &state, const GroundAction &action) {
    for (const GroundAtom &a : action.pre_pos)
        if (!state.contains(a))
            return a.to_string();
    for (const GroundAtom &a : action.pre_neg)
        if (state.contains(a))
            return "(not " + a.to_string() + ")";
    return std::nullopt;
}

bool applicable(const State &state, const GroundAction &action) {
    return !first_violation(state, action).has_value();
}

State apply(const State &state, const GroundAction &action) {
    if (auto v = first_violation(state, action))
        throw NotApplicable(action.to_string() + " requires " + *v);
    State next = state;
    for (const GroundAtom &a : action.del)
        next.erase(a);
    for (const GroundAtom &a : action.add)
        next.insert(a);
    return next;
}

bool satisfies(const State &state, const std::vector<pddl::Literal> &goal) {
    return std::all_of(goal.begin(), goal.end(), [&](const pddl::Literal &l) {
        return state.contains(ground_atom(l.atom)) == l.positive;
    });
}

ValidationReport validate_plan(const pddl::DomainDef &domain, const pddl::ProblemDef &problem,
                               const Plan &plan) {
    ValidationReport report;
    if (problem.domain_name != domain.name) {
        report.message = "problem references domain '" + problem.domain_name + "'";
        return report;
    }
    State state = make_state(problem.init);
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        const GroundAction &step = plan.steps[i];
        if (auto v = first_violation(state, step)) {
            report.failed_step = i;
            report.failed_literal = *v;
            report.message = "step " + std::to_string(i) + " " + step.to_string() +
                             " is not applicable: " + *v + " does not hold";
            return report;
        }
        state = strips::apply(state, step);
        report.cost += step.cost;
    }
    for (const pddl::Literal &g : problem.goal) {
        if (state.contains(ground_atom(g.atom)) != g.positive) {
            report.failed_step = plan.steps.size();
            report.failed_literal = pddl::to_string(g);
            report.message = "goal " + report.failed_literal + " does not hold after the plan";
            return report;
        }
    }
    report.valid = true;
    report.message = "valid";
    return report;
}

Plan parse_plan(std::string_view text, const pddl::DomainDef &domain,
                const pddl::ProblemDef &problem) {
    std::vector<GroundAction> steps;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view line = text.substr(start, end - start);
        ++line_no;
        start = end + 1;
        if (auto semi = line.find(';'); semi != std::string_view::npos)
            line = line.substr(0, semi);
        if (line.find_first_not_of(" \t\r") == std::string_view::npos)
            continue;
        detail::SExpr e;
        try {
            e = detail::read_sexpr(line);
        } catch (const SyntaxError &err) {
            throw SyntaxError(line_no, err.column(), "malformed plan step");
        }
        if (!e.is_list || e.items.empty() || !e.items.front().is_atom())
            throw SyntaxError(line_no, e.column, "expected '(action args...)'");
        std::vector<std::string> args;
        for (std::size_t i = 1; i < e.items.size(); ++i) {
            if (!e.items[i].is_atom())
                throw SyntaxError(line_no, e.items[i].column, "expected object name");
            args.push_back(e.items[i].text);
        }
        auto step = instantiate(domain, problem, e.items.front().text, args);
        if (!step)
            throw NotApplicable("line " + std::to_string(line_no) +
                                ": binding violates an equality constraint of '" +
                                e.items.front().text + "'");
        steps.push_back(std::move(*step));
        if (end == text.size())
            break;
    }
    return Plan::from_steps(std::move(steps));
}

std::string print_plan(const Plan &plan) {
    std::ostringstream out;
    for (const GroundAction &a : plan.steps)
        out << a.to_string() << '\n';
    out << "; cost = " << plan.cost << " (unit cost)\n";
    return out.str();
}

} // namespace plankb::strips

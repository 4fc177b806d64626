#include <algorithm>

#include "plankb/errors.hpp"
#include "plankb/mapper.hpp"

namespace plankb::mapper {

using nlohmann::json;

namespace {

json typed_names(const std::vector<pddl::TypedName> &names) {
    json out = json::array();
    for (const auto &n : names)
        out.push_back({{"name", n.name}, {"type", n.type}});
    return out;
}

json atom_json(const pddl::Atom &a) { return {{"predicate", a.predicate}, {"args", a.args}}; }

json literal_json(const pddl::Literal &l) {
    return {{"positive", l.positive}, {"predicate", l.atom.predicate}, {"args", l.atom.args}};
}

template <class T, class Fn>
json array_of(const std::vector<T> &items, Fn &&fn) {
    json out = json::array();
    for (const T &item : items)
        out.push_back(fn(item));
    return out;
}

// -- reading -----------------------------------------------------------------

[[noreturn]] void schema_fail(const std::string &path, const std::string &what) {
    throw JsonSchemaError(path + ": " + what);
}

const json &field(const json &obj, const std::string &path, const char *key) {
    if (!obj.is_object())
        schema_fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end())
        schema_fail(path, std::string("missing key '") + key + "'");
    return *it;
}

std::string string_at(const json &obj, const std::string &path, const char *key) {
    const json &v = field(obj, path, key);
    if (!v.is_string())
        schema_fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

const json &array_at(const json &obj, const std::string &path, const char *key) {
    const json &v = field(obj, path, key);
    if (!v.is_array())
        schema_fail(path + "." + key, "expected an array");
    return v;
}

std::vector<std::string> strings_at(const json &obj, const std::string &path, const char *key) {
    const json &arr = array_at(obj, path, key);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_string())
            schema_fail(path + "." + key + "[" + std::to_string(i) + "]", "expected a string");
        out.push_back(arr[i].get<std::string>());
    }
    return out;
}

std::vector<pddl::TypedName> read_typed(const json &obj, const std::string &path, const char *key) {
    const json &arr = array_at(obj, path, key);
    std::vector<pddl::TypedName> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string p = path + "." + key + "[" + std::to_string(i) + "]";
        out.push_back({string_at(arr[i], p, "name"), string_at(arr[i], p, "type")});
    }
    return out;
}

pddl::Atom read_atom(const json &obj, const std::string &path) {
    return {string_at(obj, path, "predicate"), strings_at(obj, path, "args")};
}

std::vector<pddl::Atom> read_atoms(const json &obj, const std::string &path, const char *key) {
    const json &arr = array_at(obj, path, key);
    std::vector<pddl::Atom> out;
    for (std::size_t i = 0; i < arr.size(); ++i)
        out.push_back(read_atom(arr[i], path + "." + key + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<pddl::Literal> read_literals(const json &obj, const std::string &path, const char *key) {
    const json &arr = array_at(obj, path, key);
    std::vector<pddl::Literal> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string p = path + "." + key + "[" + std::to_string(i) + "]";
        const json &positive = field(arr[i], p, "positive");
        if (!positive.is_boolean())
            schema_fail(p + ".positive", "expected a boolean");
        out.push_back({positive.get<bool>(), read_atom(arr[i], p)});
    }
    return out;
}

pddl::DomainDef read_domain(const json &j) {
    const std::string path = "$.domain";
    pddl::DomainDef d;
    d.name = string_at(j, path, "name");
    for (std::string r : strings_at(j, path, "requirements")) {
        if (!r.empty() && r.front() == ':')
            r.erase(0, 1);
        d.requirements.insert(r);
    }
    const json &types = array_at(j, path, "types");
    for (std::size_t i = 0; i < types.size(); ++i) {
        const std::string p = path + ".types[" + std::to_string(i) + "]";
        d.types.push_back({string_at(types[i], p, "name"), string_at(types[i], p, "parent")});
    }
    d.constants = read_typed(j, path, "constants");
    const json &preds = array_at(j, path, "predicates");
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const std::string p = path + ".predicates[" + std::to_string(i) + "]";
        d.predicates.push_back({string_at(preds[i], p, "name"), read_typed(preds[i], p, "parameters")});
    }
    const json &actions = array_at(j, path, "actions");
    for (std::size_t i = 0; i < actions.size(); ++i) {
        const std::string p = path + ".actions[" + std::to_string(i) + "]";
        pddl::ActionSchema a;
        a.name = string_at(actions[i], p, "name");
        a.params = read_typed(actions[i], p, "parameters");
        a.precondition = read_literals(actions[i], p, "precondition");
        a.add = read_atoms(actions[i], p, "add");
        a.del = read_atoms(actions[i], p, "delete");
        d.actions.push_back(std::move(a));
    }
    return d;
}

} // namespace

json to_json(const Bundle &b) {
    const pddl::DomainDef &d = b.domain;
    json domain = {
        {"name", d.name},
        {"requirements", json(std::vector<std::string>(d.requirements.begin(), d.requirements.end()))},
        {"types", array_of(d.types, [](const pddl::TypeName &t) {
             return json{{"name", t.name}, {"parent", t.parent}};
         })},
        {"constants", typed_names(d.constants)},
        {"predicates", array_of(d.predicates, [](const pddl::PredicateSchema &p) {
             return json{{"name", p.name}, {"parameters", typed_names(p.params)}};
         })},
        {"actions", array_of(d.actions, [](const pddl::ActionSchema &a) {
             return json{{"name", a.name},
                         {"parameters", typed_names(a.params)},
                         {"precondition", array_of(a.precondition, literal_json)},
                         {"add", array_of(a.add, atom_json)},
                         {"delete", array_of(a.del, atom_json)}};
         })},
    };
    json problems = array_of(b.problems, [](const pddl::ProblemDef &p) {
        return json{{"name", p.name},
                    {"domain", p.domain_name},
                    {"objects", typed_names(p.objects)},
                    {"init", array_of(p.init, atom_json)},
                    {"goal", array_of(p.goal, literal_json)}};
    });
    json plans = array_of(b.plans, [](const PlanRecord &r) {
        return json{{"problem", r.problem},
                    {"planner", r.planner},
                    {"cost", r.plan.cost},
                    {"steps", array_of(r.plan.steps, [](const strips::GroundAction &s) {
                         return json{{"action", s.schema}, {"args", s.args()}};
                     })}};
    });
    return {{"domain", std::move(domain)}, {"problems", std::move(problems)}, {"plans", std::move(plans)}};
}

Bundle from_json(const json &j) {
    if (!j.is_object())
        schema_fail("$", "expected an object");
    Bundle b;
    {
        pddl::DomainDef raw = read_domain(field(j, "$", "domain"));
        // Going through the PDDL reader applies the same checks and
        // normalisation as loading a .pddl file.
        try {
            b.domain = pddl::parse_domain(pddl::print_domain(raw));
        } catch (const Error &e) {
            schema_fail("$.domain", e.what());
        }
        if (auto issues = pddl::validate_domain(b.domain); !issues.empty())
            schema_fail("$.domain", issues.front().location + ": " + issues.front().detail);
    }

    const json &problems = array_at(j, "$", "problems");
    for (std::size_t i = 0; i < problems.size(); ++i) {
        const std::string p = "$.problems[" + std::to_string(i) + "]";
        pddl::ProblemDef raw;
        raw.name = string_at(problems[i], p, "name");
        raw.domain_name = string_at(problems[i], p, "domain");
        raw.objects = read_typed(problems[i], p, "objects");
        raw.init = read_atoms(problems[i], p, "init");
        raw.goal = read_literals(problems[i], p, "goal");
        try {
            b.problems.push_back(pddl::parse_problem(pddl::print_problem(raw), b.domain));
        } catch (const Error &e) {
            schema_fail(p, e.what());
        }
    }

    const json &plans = array_at(j, "$", "plans");
    for (std::size_t i = 0; i < plans.size(); ++i) {
        const std::string p = "$.plans[" + std::to_string(i) + "]";
        PlanRecord rec;
        rec.problem = string_at(plans[i], p, "problem");
        rec.planner = string_at(plans[i], p, "planner");
        auto problem = std::find_if(b.problems.begin(), b.problems.end(),
                                    [&](const pddl::ProblemDef &pd) { return pd.name == rec.problem; });
        if (problem == b.problems.end())
            schema_fail(p + ".problem", "unknown problem '" + rec.problem + "'");
        const json &steps = array_at(plans[i], p, "steps");
        std::vector<strips::GroundAction> ground;
        for (std::size_t k = 0; k < steps.size(); ++k) {
            const std::string sp = p + ".steps[" + std::to_string(k) + "]";
            std::string action = string_at(steps[k], sp, "action");
            std::vector<std::string> args = strings_at(steps[k], sp, "args");
            std::optional<strips::GroundAction> step;
            try {
                step = strips::instantiate(b.domain, *problem, action, args);
            } catch (const Error &e) {
                schema_fail(sp, e.what());
            }
            if (!step)
                schema_fail(sp, "arguments violate the action's equality constraints");
            ground.push_back(std::move(*step));
        }
        rec.plan = strips::Plan::from_steps(std::move(ground));
        const json &cost = field(plans[i], p, "cost");
        if (!cost.is_number_unsigned() && !(cost.is_number_integer() && cost.get<std::int64_t>() >= 0))
            schema_fail(p + ".cost", "expected a non-negative integer");
        if (cost.get<std::uint64_t>() != rec.plan.cost)
            schema_fail(p + ".cost", "does not equal the sum of step costs");
        b.plans.push_back(std::move(rec));
    }
    return b;
}

} // namespace plankb::mapper

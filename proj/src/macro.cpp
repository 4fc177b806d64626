#include "plankb/macro.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "plankb/errors.hpp"

namespace plankb::macro {

using pddl::ActionSchema;
using pddl::Atom;
using pddl::DomainDef;
using pddl::Literal;

std::string LiftedPair::label() const { return first + " * " + second; }

LiftedPair lift(const mapper::StepText &first, const mapper::StepText &second) {
    LiftedPair out{first.action, second.action, {}, 1};
    std::vector<bool> used(first.args.size(), false);
    for (std::size_t j = 0; j < second.args.size(); ++j) {
        for (std::size_t i = 0; i < first.args.size(); ++i) {
            if (!used[i] && first.args[i] == second.args[j]) {
                used[i] = true;
                out.unifier.emplace_back(j, i);
                break;
            }
        }
    }
    return out;
}

namespace {

void sort_pairs(std::vector<LiftedPair> &pairs) {
    std::sort(pairs.begin(), pairs.end(), [](const LiftedPair &a, const LiftedPair &b) {
        if (a.frequency != b.frequency)
            return a.frequency > b.frequency;
        return std::tie(a.first, a.second, a.unifier) < std::tie(b.first, b.second, b.unifier);
    });
}

} // namespace

std::vector<LiftedPair> mine_pairs(const std::vector<std::vector<mapper::StepText>> &plans) {
    using Key = std::tuple<std::string, std::string, std::vector<std::pair<std::size_t, std::size_t>>>;
    std::map<Key, std::uint64_t> counts;
    for (const auto &plan : plans) {
        for (std::size_t i = 0; i + 1 < plan.size(); ++i) {
            LiftedPair p = lift(plan[i], plan[i + 1]);
            ++counts[Key{p.first, p.second, p.unifier}];
        }
    }
    std::vector<LiftedPair> out;
    out.reserve(counts.size());
    for (auto &[key, n] : counts)
        out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), n});
    sort_pairs(out);
    return out;
}

namespace {

/// Stored plans of a domain, keyed by plan IRI so the result is independent
/// of insertion order.
std::map<kg::Iri, std::vector<mapper::StepText>> stored_plans(const kg::Graph &g,
                                                              const kg::Iri &domain) {
    namespace v = kg::vocab;
    std::map<kg::Iri, std::vector<mapper::StepText>> out;
    for (const kg::Term &p : g.objects(domain, v::hasProblem())) {
        const auto *problem = std::get_if<kg::Iri>(&p);
        if (problem == nullptr)
            continue;
        for (const kg::Term &pl : g.objects(*problem, v::hasPlan()))
            if (const auto *plan = std::get_if<kg::Iri>(&pl))
                out[*plan] = mapper::plan_steps(g, *plan);
    }
    return out;
}

} // namespace

std::vector<GroundPairOccurrence> occurrences(const kg::Graph &graph, const kg::Iri &domain) {
    std::vector<GroundPairOccurrence> out;
    for (const auto &[plan, steps] : stored_plans(graph, domain))
        for (std::size_t i = 0; i + 1 < steps.size(); ++i)
            out.push_back({steps[i], steps[i + 1], plan, i});
    return out;
}

std::vector<LiftedPair> mine_pairs(const kg::Graph &graph, const kg::Iri &domain) {
    auto plans = stored_plans(graph, domain);
    if (plans.empty())
        throw NoPlansForDomain("no stored plans for <" + domain.value + ">");
    std::vector<std::vector<mapper::StepText>> corpus;
    corpus.reserve(plans.size());
    for (auto &[iri, steps] : plans)
        corpus.push_back(std::move(steps));
    return mine_pairs(corpus);
}

// ---------------------------------------------------------------------------
// Unification of the two schemas

namespace {

struct Unified {
    const ActionSchema *a1 = nullptr;
    const ActionSchema *a2 = nullptr;
    std::vector<pddl::TypedName> params;
    std::vector<std::string> first_args;
    std::vector<std::string> second_args;
    std::vector<std::size_t> fresh; // indices into params introduced by a2
    std::map<std::string, std::string> rename2;
    std::optional<std::string> type_conflict;
};

const ActionSchema &schema(const DomainDef &d, const std::string &name) {
    const ActionSchema *a = d.find_action(name);
    if (a == nullptr)
        throw UnknownSchema("action '" + name + "' is not defined in domain " + d.name);
    return *a;
}

Unified unify(const DomainDef &d, const LiftedPair &pair) {
    Unified u;
    u.a1 = &schema(d, pair.first);
    u.a2 = &schema(d, pair.second);
    std::set<std::string> used;
    for (const pddl::TypedName &p : u.a1->params) {
        u.params.push_back(p);
        u.first_args.push_back(p.name);
        used.insert(p.name);
    }
    std::map<std::size_t, std::size_t> slot;
    std::set<std::size_t> taken;
    for (auto [j, i] : pair.unifier) {
        if (j >= u.a2->params.size() || i >= u.a1->params.size())
            throw UnknownSchema("unifier slot out of range for " + pair.label());
        if (!slot.emplace(j, i).second || !taken.insert(i).second)
            throw UnknownSchema("unifier of " + pair.label() + " is not injective");
    }
    u.second_args.resize(u.a2->params.size());
    for (std::size_t j = 0; j < u.a2->params.size(); ++j) {
        const pddl::TypedName &p2 = u.a2->params[j];
        auto it = slot.find(j);
        if (it != slot.end()) {
            pddl::TypedName &p1 = u.params[it->second];
            if (d.is_subtype(p2.type, p1.type)) {
                p1.type = p2.type;
            } else if (!d.is_subtype(p1.type, p2.type)) {
                u.type_conflict = pair.label() + ": " + p1.name + " - " + p1.type + " vs " +
                                  p2.name + " - " + p2.type;
            }
            u.second_args[j] = p1.name;
        } else {
            std::string name = p2.name;
            for (int k = 2; used.contains(name); ++k)
                name = p2.name + std::to_string(k);
            used.insert(name);
            u.fresh.push_back(u.params.size());
            u.params.push_back({name, p2.type});
            u.second_args[j] = name;
        }
        u.rename2[p2.name] = u.second_args[j];
    }
    return u;
}

Atom rename(const Atom &a, const std::map<std::string, std::string> &m) {
    Atom out = a;
    for (std::string &arg : out.args)
        if (auto it = m.find(arg); it != m.end())
            arg = it->second;
    return out;
}

struct Sets {
    std::set<Atom> pre_pos, pre_neg, add, del;
    std::vector<Literal> equalities;
};

Sets sets_of(const ActionSchema &a, const std::map<std::string, std::string> &m) {
    Sets s;
    for (const Literal &l : a.precondition) {
        Atom atom = rename(l.atom, m);
        if (atom.is_equality())
            s.equalities.push_back({l.positive, atom});
        else
            (l.positive ? s.pre_pos : s.pre_neg).insert(atom);
    }
    for (const Atom &atom : a.add)
        s.add.insert(rename(atom, m));
    for (const Atom &atom : a.del)
        s.del.insert(rename(atom, m));
    return s;
}

enum class Truth { always, never, open };

/// Static value of an equality literal whose arguments are both constants
/// or the same variable.
Truth equality_truth(const Literal &l) {
    const auto &args = l.atom.args;
    if (args.size() != 2)
        return Truth::open;
    bool same = args[0] == args[1];
    bool both_constant = !pddl::is_variable(args[0]) && !pddl::is_variable(args[1]);
    if (!same && !both_constant)
        return Truth::open;
    return same == l.positive ? Truth::always : Truth::never;
}

bool intersects(const std::set<Atom> &a, const std::set<Atom> &b) {
    return std::any_of(a.begin(), a.end(), [&](const Atom &x) { return b.contains(x); });
}

std::set<Atom> minus(const std::set<Atom> &a, const std::set<Atom> &b) {
    std::set<Atom> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

bool chains(const Sets &s1, const Sets &s2) {
    for (const Literal &l : s2.equalities)
        if (equality_truth(l) == Truth::never)
            return false;
    const bool enables = intersects(s1.add, s2.pre_pos) || intersects(minus(s1.pre_pos, s1.del), s2.pre_pos);
    const bool destroys = intersects(minus(s2.pre_pos, s1.add), s1.del);
    const bool blocks = intersects(s2.pre_neg, s1.add);
    return enables && !destroys && !blocks;
}

std::map<std::string, std::string> identity(const ActionSchema &a) {
    std::map<std::string, std::string> m;
    for (const auto &p : a.params)
        m[p.name] = p.name;
    return m;
}

} // namespace

bool chain_filter(const DomainDef &d, const LiftedPair &pair) {
    Unified u = unify(d, pair);
    if (u.type_conflict)
        return false;
    return chains(sets_of(*u.a1, identity(*u.a1)), sets_of(*u.a2, u.rename2));
}

MacroSchema compose(const DomainDef &d, const LiftedPair &pair) {
    Unified u = unify(d, pair);
    if (u.type_conflict)
        throw TypeConflict(*u.type_conflict);
    const Sets s1 = sets_of(*u.a1, identity(*u.a1));
    const Sets s2 = sets_of(*u.a2, u.rename2);
    if (!chains(s1, s2))
        throw ChainingViolation(pair.label() + " does not chain under its unifier");

    MacroSchema m;
    m.name = pair.first + "_" + pair.second;
    m.provenance = pair;
    m.first_args = u.first_args;
    m.second_args = u.second_args;
    ActionSchema &a = m.action;
    a.name = m.name;
    a.params = u.params;

    std::set<Literal> seen;
    auto push = [&](const Literal &l) {
        if (l.atom.is_equality() && equality_truth(l) == Truth::always)
            return;
        if (seen.insert(l).second)
            a.precondition.push_back(l);
    };
    for (const Literal &l : u.a1->precondition)
        push(l);
    for (const Literal &l : u.a2->precondition) {
        Literal r{l.positive, rename(l.atom, u.rename2)};
        if (!r.atom.is_equality()) {
            if (r.positive && s1.add.contains(r.atom))
                continue;
            if (!r.positive && s1.del.contains(r.atom))
                continue;
        }
        push(r);
    }
    for (std::size_t f : u.fresh) {
        for (std::size_t i = 0; i < u.a1->params.size(); ++i) {
            const auto &fresh = u.params[f];
            const auto &old = u.params[i];
            if (d.is_subtype(fresh.type, old.type) || d.is_subtype(old.type, fresh.type))
                push(Literal{false, Atom{"=", {old.name, fresh.name}}});
        }
    }

    std::set<Atom> add = s2.add;
    for (const Atom &x : minus(s1.add, s2.del))
        add.insert(x);
    std::set<Atom> del = s1.del;
    del.insert(s2.del.begin(), s2.del.end());
    del = minus(del, add);
    a.add.assign(add.begin(), add.end());
    a.del.assign(del.begin(), del.end());
    return m;
}

DomainDef augment_domain(const DomainDef &domain, const std::vector<MacroSchema> &macros,
                         std::size_t k) {
    DomainDef out = domain;
    std::set<std::string> names;
    for (const ActionSchema &a : out.actions)
        names.insert(a.name);
    const std::size_t n = std::min(k, macros.size());
    for (std::size_t i = 0; i < n; ++i) {
        ActionSchema a = macros[i].action;
        std::string name = a.name;
        for (int s = 2; names.contains(name); ++s)
            name = a.name + "-" + std::to_string(s);
        a.name = name;
        names.insert(name);
        bool uses_equality = std::any_of(a.precondition.begin(), a.precondition.end(),
                                         [](const Literal &l) { return l.atom.is_equality(); });
        if (uses_equality && !out.requirements.contains("equality")) {
            if (out.requirements.empty())
                out.requirements.insert("strips");
            out.requirements.insert("equality");
        }
        out.actions.push_back(std::move(a));
    }
    return out;
}

namespace {

std::string unifier_text(const LiftedPair &p) {
    std::string out;
    for (auto [j, i] : p.unifier) {
        if (!out.empty())
            out += ',';
        out += std::to_string(j) + "=" + std::to_string(i);
    }
    return out;
}

/// Distinguishes macros that share a name pair but differ in unifier.
std::string macro_key(const MacroSchema &m) {
    std::string key = m.name;
    for (auto [j, i] : m.provenance.unifier)
        key += "-" + std::to_string(j) + "." + std::to_string(i);
    return key;
}

} // namespace

kg::Graph store_macros(kg::Graph graph, const kg::Iri &domain, const std::vector<MacroSchema> &macros) {
    namespace v = kg::vocab;
    if (!graph.contains({domain, v::type(), v::PlanningDomain()}))
        throw UnknownDomain("<" + domain.value + "> is not a mapped PlanningDomain");
    std::string dn;
    for (const kg::Term &t : graph.objects(domain, v::label()))
        if (const auto *lit = std::get_if<kg::Literal>(&t))
            dn = lit->lexical;
    if (dn.empty())
        throw UnknownDomain("<" + domain.value + "> has no label");
    for (const MacroSchema &m : macros) {
        const kg::Iri first = mapper::action_iri(dn, m.provenance.first);
        const kg::Iri second = mapper::action_iri(dn, m.provenance.second);
        for (const kg::Iri &a : {first, second})
            if (!graph.contains({a, v::type(), v::Action()}))
                throw UnknownSchema("<" + a.value + "> is not a mapped Action");
        const kg::Iri M = mapper::macro_iri(dn, macro_key(m));
        graph.insert({domain, v::hasMacro(), M});
        graph.insert({M, v::type(), v::MacroAction()});
        graph.insert({M, v::label(), kg::string_literal(m.name)});
        graph.insert({M, v::hasActionName(), kg::string_literal(m.provenance.label())});
        graph.insert({M, v::firstAction(), first});
        graph.insert({M, v::secondAction(), second});
        graph.insert({M, v::frequency(), kg::count_literal(m.provenance.frequency)});
        graph.insert({M, v::unifier(), kg::string_literal(unifier_text(m.provenance))});
    }
    return graph;
}

std::vector<MinedPair> mine_and_compose(const kg::Graph &graph, const DomainDef &domain) {
    std::vector<MinedPair> out;
    for (LiftedPair &p : mine_pairs(graph, mapper::domain_iri(domain.name))) {
        MinedPair mp;
        mp.chains = chain_filter(domain, p);
        if (mp.chains)
            mp.macro = compose(domain, p);
        mp.pair = std::move(p);
        out.push_back(std::move(mp));
    }
    return out;
}

nlohmann::json report_json(const std::string &domain, const std::vector<MinedPair> &mined) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const MinedPair &m : mined) {
        nlohmann::json unifier = nlohmann::json::array();
        for (auto [j, i] : m.pair.unifier)
            unifier.push_back({j, i});
        pairs.push_back({{"first", m.pair.first},
                         {"second", m.pair.second},
                         {"label", m.pair.label()},
                         {"unifier", unifier},
                         {"frequency", m.pair.frequency},
                         {"chains", m.chains},
                         {"macro", m.macro ? nlohmann::json(m.macro->name) : nlohmann::json()}});
    }
    return {{"domain", domain}, {"pairs", pairs}};
}

std::string report_text(const std::vector<MinedPair> &mined) {
    std::ostringstream out;
    for (const MinedPair &m : mined) {
        out << m.pair.label() << " - " << m.pair.frequency;
        if (!m.pair.unifier.empty())
            out << "  [" << unifier_text(m.pair) << "]";
        out << (m.chains ? "  chains" : "  rejected") << '\n';
    }
    return out.str();
}

std::vector<MacroSchema> macros_from_report(const nlohmann::json &report, const DomainDef &domain) {
    auto bad = [](const std::string &what) -> JsonSchemaError {
        return JsonSchemaError("macro report: " + what);
    };
    if (!report.is_object() || !report.contains("pairs") || !report["pairs"].is_array())
        throw bad("expected an object with a 'pairs' array");
    std::vector<MacroSchema> out;
    for (const nlohmann::json &p : report["pairs"]) {
        if (!p.is_object() || !p.contains("first") || !p.contains("second") || !p.contains("chains") ||
            !p.contains("unifier") || !p.contains("frequency") || !p["first"].is_string() ||
            !p["second"].is_string() || !p["chains"].is_boolean() || !p["unifier"].is_array() ||
            !p["frequency"].is_number_unsigned())
            throw bad("malformed pair entry");
        if (!p["chains"].get<bool>())
            continue;
        LiftedPair lp{p["first"].get<std::string>(), p["second"].get<std::string>(), {},
                      p["frequency"].get<std::uint64_t>()};
        for (const nlohmann::json &slot : p["unifier"]) {
            if (!slot.is_array() || slot.size() != 2 || !slot[0].is_number_unsigned() ||
                !slot[1].is_number_unsigned())
                throw bad("unifier entries must be [second_slot, first_slot]");
            lp.unifier.emplace_back(slot[0].get<std::size_t>(), slot[1].get<std::size_t>());
        }
        out.push_back(compose(domain, lp));
    }
    return out;
}

} // namespace plankb::macro

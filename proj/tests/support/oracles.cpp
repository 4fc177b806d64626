#include "oracles.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace oracle {

namespace fs = std::filesystem;
using namespace plankb;

fs::path data_dir() { return fs::path(PLANKB_DATA_DIR); }

std::string read_text(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

pddl::DomainDef domain(const std::string &name) {
    return pddl::parse_domain(read_text(data_dir() / "domains" / (name + ".pddl")));
}

pddl::ProblemDef problem(const std::string &d, const std::string &stem) {
    return pddl::parse_problem(read_text(data_dir() / "problems" / d / (stem + ".pddl")), domain(d));
}

std::vector<std::string> problem_stems(const std::string &d) {
    std::vector<std::string> out;
    for (const auto &e : fs::directory_iterator(data_dir() / "problems" / d))
        if (e.path().extension() == ".pddl")
            out.push_back(e.path().stem().string());
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------

namespace {

bool term_matches(const kg::Term &pattern, const kg::Term &value, kg::Binding &b) {
    if (const auto *v = std::get_if<kg::Variable>(&pattern)) {
        auto it = b.find(v->name);
        if (it != b.end())
            return it->second == value;
        b.emplace(v->name, value);
        return true;
    }
    return pattern == value;
}

} // namespace

std::vector<kg::Binding> nested_loop(const kg::Graph &g, const kg::Query &q) {
    const std::vector<kg::Triple> all = g.triples();
    std::vector<kg::Binding> partial{kg::Binding{}};
    for (const kg::TriplePattern &p : q.where) {
        std::vector<kg::Binding> next;
        for (const kg::Binding &b : partial) {
            for (const kg::Triple &t : all) {
                kg::Binding ext = b;
                if (term_matches(p.subject, t.subject, ext) && term_matches(p.predicate, t.predicate, ext) &&
                    term_matches(p.object, t.object, ext))
                    next.push_back(std::move(ext));
            }
        }
        partial = std::move(next);
    }
    std::vector<std::string> cols = q.select;
    if (cols.empty()) {
        std::set<std::string> names;
        for (const auto &p : q.where)
            for (const kg::Term *t : {&p.subject, &p.predicate, &p.object})
                if (const auto *v = std::get_if<kg::Variable>(t))
                    names.insert(v->name);
        cols.assign(names.begin(), names.end());
    }
    std::vector<std::vector<kg::Term>> rows;
    for (const kg::Binding &b : partial) {
        std::vector<kg::Term> row;
        for (const auto &c : cols)
            row.push_back(b.count(c) ? b.at(c) : kg::Term{kg::Literal{}});
        rows.push_back(row);
    }
    std::sort(rows.begin(), rows.end());
    if (q.distinct)
        rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    if (q.count_as)
        return {kg::Binding{{*q.count_as, kg::count_literal(rows.size())}}};
    std::vector<kg::Binding> out;
    for (const auto &row : rows) {
        kg::Binding b;
        for (std::size_t i = 0; i < cols.size(); ++i)
            b[cols[i]] = row[i];
        out.push_back(b);
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

std::string text_of(const std::string &pred, const std::vector<std::string> &args) {
    std::string s = "(" + pred;
    for (const auto &a : args)
        s += " " + a;
    return s + ")";
}

std::vector<pddl::TypedName> universe(const pddl::DomainDef &d, const pddl::ProblemDef &p) {
    std::vector<pddl::TypedName> u = d.constants;
    u.insert(u.end(), p.objects.begin(), p.objects.end());
    std::sort(u.begin(), u.end(), [](auto &a, auto &b) { return a.name < b.name; });
    return u;
}

} // namespace

std::optional<TextAction> bind(const pddl::DomainDef &d, const pddl::ProblemDef &,
                               const std::string &schema, const std::vector<std::string> &args) {
    const pddl::ActionSchema *a = nullptr;
    for (const auto &s : d.actions)
        if (s.name == schema)
            a = &s;
    if (a == nullptr || a->params.size() != args.size())
        return std::nullopt;
    std::map<std::string, std::string> sub;
    for (std::size_t i = 0; i < args.size(); ++i)
        sub[a->params[i].name] = args[i];
    auto ground = [&](const pddl::Atom &atom) {
        std::vector<std::string> xs;
        for (const auto &t : atom.args)
            xs.push_back(sub.count(t) ? sub.at(t) : t);
        return xs;
    };
    TextAction out{schema, args, {}, {}, {}, {}};
    for (const pddl::Literal &l : a->precondition) {
        auto xs = ground(l.atom);
        if (l.atom.predicate == "=") {
            if ((xs[0] == xs[1]) != l.positive)
                return std::nullopt;
            continue;
        }
        (l.positive ? out.pre_pos : out.pre_neg).push_back(text_of(l.atom.predicate, xs));
    }
    for (const auto &atom : a->add)
        out.add.push_back(text_of(atom.predicate, ground(atom)));
    for (const auto &atom : a->del)
        out.del.push_back(text_of(atom.predicate, ground(atom)));
    return out;
}

std::vector<TextAction> enumerate_actions(const pddl::DomainDef &d, const pddl::ProblemDef &p) {
    const auto objs = universe(d, p);
    std::vector<TextAction> out;
    std::vector<const pddl::ActionSchema *> schemas;
    for (const auto &a : d.actions)
        schemas.push_back(&a);
    std::sort(schemas.begin(), schemas.end(), [](auto *x, auto *y) { return x->name < y->name; });
    for (const pddl::ActionSchema *a : schemas) {
        const std::size_t n = a->params.size();
        std::vector<std::size_t> idx(n, 0);
        if (n > 0 && objs.empty())
            continue;
        while (true) {
            std::vector<std::string> args;
            bool typed_ok = true;
            for (std::size_t i = 0; i < n; ++i) {
                args.push_back(objs[idx[i]].name);
                typed_ok = typed_ok && d.is_subtype(objs[idx[i]].type, a->params[i].type);
            }
            if (typed_ok)
                if (auto t = oracle::bind(d, p, a->name, args))
                    out.push_back(*t);
            std::size_t k = n;
            while (k > 0 && ++idx[k - 1] == objs.size())
                idx[--k] = 0;
            if (k == 0)
                break;
        }
    }
    return out;
}

TextState initial(const pddl::ProblemDef &p) {
    TextState s;
    for (const auto &a : p.init)
        s.insert(text_of(a.predicate, a.args));
    return s;
}

TextState to_text(const strips::State &s) {
    TextState out;
    for (const auto &a : s)
        out.insert(text_of(a.predicate, a.args));
    return out;
}

bool applicable(const TextState &s, const TextAction &a) {
    for (const auto &x : a.pre_pos)
        if (!s.count(x))
            return false;
    for (const auto &x : a.pre_neg)
        if (s.count(x))
            return false;
    return true;
}

TextState successor(const TextState &s, const TextAction &a) {
    TextState out = s;
    for (const auto &x : a.del)
        out.erase(x);
    for (const auto &x : a.add)
        out.insert(x);
    return out;
}

bool goal_holds(const TextState &s, const pddl::ProblemDef &p) {
    for (const auto &l : p.goal) {
        if (l.atom.predicate == "=") {
            if ((l.atom.args[0] == l.atom.args[1]) != l.positive)
                return false;
            continue;
        }
        if (s.count(text_of(l.atom.predicate, l.atom.args)) != (l.positive ? 1U : 0U))
            return false;
    }
    return true;
}

bool simulate(const pddl::DomainDef &d, const pddl::ProblemDef &p,
              const std::vector<std::pair<std::string, std::vector<std::string>>> &plan) {
    TextState s = initial(p);
    for (const auto &[schema, args] : plan) {
        auto a = oracle::bind(d, p, schema, args);
        if (!a || !applicable(s, *a))
            return false;
        s = successor(s, *a);
    }
    return goal_holds(s, p);
}

Exhaustive explore(const pddl::DomainDef &d, const pddl::ProblemDef &p, std::size_t cap) {
    const auto actions = enumerate_actions(d, p);
    std::map<TextState, std::uint64_t> depth;
    std::deque<TextState> queue;
    const TextState s0 = initial(p);
    depth[s0] = 0;
    queue.push_back(s0);
    Exhaustive out;
    while (!queue.empty()) {
        TextState s = queue.front();
        queue.pop_front();
        const std::uint64_t g = depth.at(s);
        if (goal_holds(s, p) && (!out.optimum || g < *out.optimum))
            out.optimum = g;
        for (const auto &a : actions) {
            if (!applicable(s, a))
                continue;
            TextState t = successor(s, a);
            if (depth.count(t))
                continue;
            if (depth.size() >= cap) {
                out.reachable = depth.size();
                return out;
            }
            depth[t] = g + 1;
            queue.push_back(std::move(t));
        }
    }
    out.reachable = depth.size();
    out.complete = true;
    return out;
}

std::vector<TextState> reachable_states(const pddl::DomainDef &d, const pddl::ProblemDef &p,
                                        std::size_t cap) {
    const auto actions = enumerate_actions(d, p);
    std::set<TextState> seen{initial(p)};
    std::deque<TextState> queue{initial(p)};
    while (!queue.empty() && seen.size() < cap) {
        TextState s = queue.front();
        queue.pop_front();
        for (const auto &a : actions)
            if (applicable(s, a))
                if (auto t = successor(s, a); seen.insert(t).second)
                    queue.push_back(t);
    }
    return {seen.begin(), seen.end()};
}

// ---------------------------------------------------------------------------

std::map<PairKey, std::uint64_t> sliding_window(const std::vector<std::vector<mapper::StepText>> &plans) {
    std::map<PairKey, std::uint64_t> counts;
    for (const auto &plan : plans) {
        for (std::size_t i = 0; i + 1 < plan.size(); ++i) {
            const auto &a = plan[i];
            const auto &b = plan[i + 1];
            std::vector<bool> used(a.args.size(), false);
            std::vector<std::pair<std::size_t, std::size_t>> unifier;
            for (std::size_t j = 0; j < b.args.size(); ++j) {
                for (std::size_t k = 0; k < a.args.size(); ++k) {
                    if (!used[k] && a.args[k] == b.args[j]) {
                        used[k] = true;
                        unifier.emplace_back(j, k);
                        break;
                    }
                }
            }
            ++counts[{a.action, b.action, unifier}];
        }
    }
    return counts;
}

SweepResult macro_sweep(const pddl::DomainDef &base, const macro::MacroSchema &m,
                        const pddl::ProblemDef &p, std::size_t cap) {
    pddl::DomainDef only = base;
    only.actions = {m.action};
    const auto groundings = enumerate_actions(only, p);
    SweepResult out;
    for (const TextState &s : reachable_states(base, p, cap)) {
        ++out.states;
        for (const TextAction &g : groundings) {
            if (!applicable(s, g))
                continue;
            ++out.checked;
            std::map<std::string, std::string> sub;
            for (std::size_t i = 0; i < m.action.params.size(); ++i)
                sub[m.action.params[i].name] = g.args[i];
            auto args_of = [&](const std::vector<std::string> &vars) {
                std::vector<std::string> xs;
                for (const auto &v : vars)
                    xs.push_back(sub.count(v) ? sub.at(v) : v);
                return xs;
            };
            const auto a1 = oracle::bind(base, p, m.provenance.first, args_of(m.first_args));
            const auto a2 = oracle::bind(base, p, m.provenance.second, args_of(m.second_args));
            if (!a1 || !a2 || !applicable(s, *a1)) {
                ++out.counterexamples;
                continue;
            }
            const TextState mid = successor(s, *a1);
            if (!applicable(mid, *a2) || successor(mid, *a2) != successor(s, g))
                ++out.counterexamples;
        }
    }
    return out;
}

std::optional<std::string> spreadsheet_argmax(const std::vector<select::PlannerRecord> &rows,
                                              const std::string &domain) {
    std::optional<std::string> best;
    double best_ratio = -1.0;
    for (const auto &r : rows) {
        if (r.domain != domain)
            continue;
        const double ratio = static_cast<double>(r.solved) / static_cast<double>(r.total);
        if (ratio > best_ratio || (ratio == best_ratio && r.planner < *best)) {
            best = r.planner;
            best_ratio = ratio;
        }
    }
    return best;
}

} // namespace oracle

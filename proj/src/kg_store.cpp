#include <algorithm>
#include <charconv>

#include "plankb/errors.hpp"
#include "plankb/kg.hpp"

namespace plankb::kg {

Iri onto(std::string_view local) { return Iri{std::string(kOntologyNs) + std::string(local)}; }
Iri rdf(std::string_view local) { return Iri{std::string(kRdfNs) + std::string(local)}; }
Iri xsd(std::string_view local) { return Iri{std::string(kXsdNs) + std::string(local)}; }

Literal string_literal(std::string lexical) { return Literal{std::move(lexical), xsd("string")}; }

Literal count_literal(std::uint64_t n) {
    return Literal{std::to_string(n), xsd("nonNegativeInteger")};
}

Literal integer_literal(std::int64_t n) { return Literal{std::to_string(n), xsd("integer")}; }

Literal decimal_literal(std::string lexical) { return Literal{std::move(lexical), xsd("decimal")}; }

std::optional<std::uint64_t> as_count(const Term &term) {
    const auto *lit = std::get_if<Literal>(&term);
    if (lit == nullptr)
        return std::nullopt;
    if (lit->datatype != xsd("nonNegativeInteger") && lit->datatype != xsd("integer"))
        return std::nullopt;
    std::string_view s = lit->lexical;
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
        return std::nullopt;
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        return std::nullopt;
    return value;
}

std::string to_string(const Term &term) {
    if (const auto *iri = std::get_if<Iri>(&term))
        return "<" + iri->value + ">";
    if (const auto *lit = std::get_if<Literal>(&term))
        return "\"" + lit->lexical + "\"^^<" + lit->datatype.value + ">";
    return "?" + std::get<Variable>(term).name;
}

Variable var(std::string name) { return Variable{std::move(name)}; }

// ---------------------------------------------------------------------------
// Graph

std::optional<Graph::TermId> Graph::lookup(const Term &term) const {
    auto it = ids_.find(term);
    if (it == ids_.end())
        return std::nullopt;
    return it->second;
}

Graph::TermId Graph::intern(const Term &term) {
    auto [it, inserted] = ids_.try_emplace(term, static_cast<TermId>(terms_.size()));
    if (inserted)
        terms_.push_back(term);
    return it->second;
}

Triple Graph::decode_spo(const Key &spo) const {
    return Triple{std::get<Iri>(terms_[spo[0]]), std::get<Iri>(terms_[spo[1]]), terms_[spo[2]]};
}

bool Graph::insert(const Triple &t) {
    if (std::holds_alternative<Variable>(t.object))
        throw VariableInData("object " + to_string(t.object) + " of <" + t.subject.value + ">");
    if (t.subject.value.empty() || t.predicate.value.empty())
        throw VariableInData("empty IRI in triple");
    const TermId s = intern(t.subject), p = intern(t.predicate), o = intern(t.object);
    if (!spo_.insert({s, p, o}).second)
        return false;
    pos_.insert({p, o, s});
    osp_.insert({o, s, p});
    return true;
}

bool Graph::erase(const Triple &t) {
    auto s = lookup(t.subject), p = lookup(t.predicate), o = lookup(t.object);
    if (!s || !p || !o)
        return false;
    if (spo_.erase({*s, *p, *o}) == 0)
        return false;
    pos_.erase({*p, *o, *s});
    osp_.erase({*o, *s, *p});
    return true;
}

bool Graph::contains(const Triple &t) const {
    auto s = lookup(t.subject), p = lookup(t.predicate), o = lookup(t.object);
    return s && p && o && spo_.contains({*s, *p, *o});
}

void Graph::merge(const Graph &other) {
    for (const Key &k : other.spo_)
        insert(other.decode_spo(k));
}

std::vector<Triple> Graph::triples() const {
    std::vector<Triple> out;
    out.reserve(spo_.size());
    for (const Key &k : spo_)
        out.push_back(decode_spo(k));
    std::sort(out.begin(), out.end());
    return out;
}

template <class Fn>
void Graph::scan(const std::set<Key> &index, const Key &prefix, std::size_t bound, Fn &&fn) const {
    Key lo = prefix;
    for (std::size_t i = bound; i < 3; ++i)
        lo[i] = 0;
    for (auto it = index.lower_bound(lo); it != index.end(); ++it) {
        if (!std::equal(prefix.begin(), prefix.begin() + static_cast<std::ptrdiff_t>(bound),
                        it->begin()))
            break;
        fn(*it);
    }
}

std::vector<Triple> Graph::match(const std::optional<Term> &subject,
                                 const std::optional<Term> &predicate,
                                 const std::optional<Term> &object) const {
    std::optional<TermId> s, p, o;
    if (subject && !(s = lookup(*subject)))
        return {};
    if (predicate && !(p = lookup(*predicate)))
        return {};
    if (object && !(o = lookup(*object)))
        return {};

    std::vector<Triple> out;
    if (s) {
        // spo: s | s,p | s,p,o ; s,o without p is filtered
        std::size_t bound = p ? (o ? 3 : 2) : 1;
        scan(spo_, {*s, p.value_or(0), o.value_or(0)}, bound, [&](const Key &k) {
            if (!o || k[2] == *o)
                out.push_back(decode_spo(k));
        });
    } else if (p) {
        scan(pos_, {*p, o.value_or(0), 0}, o ? 2 : 1,
             [&](const Key &k) { out.push_back(decode_spo({k[2], k[0], k[1]})); });
    } else if (o) {
        scan(osp_, {*o, 0, 0}, 1,
             [&](const Key &k) { out.push_back(decode_spo({k[1], k[2], k[0]})); });
    } else {
        for (const Key &k : spo_)
            out.push_back(decode_spo(k));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Triple> Graph::by_subject(const Iri &subject) const {
    return match(Term{subject}, std::nullopt, std::nullopt);
}

std::vector<Triple> Graph::by_predicate(const Iri &predicate) const {
    return match(std::nullopt, Term{predicate}, std::nullopt);
}

std::vector<Triple> Graph::by_object(const Term &object) const {
    return match(std::nullopt, std::nullopt, object);
}

std::vector<Term> Graph::objects(const Iri &subject, const Iri &predicate) const {
    std::vector<Term> out;
    for (Triple &t : match(Term{subject}, Term{predicate}, std::nullopt))
        out.push_back(std::move(t.object));
    return out;
}

std::vector<Iri> Graph::subjects(const Iri &predicate, const Term &object) const {
    std::vector<Iri> out;
    for (Triple &t : match(std::nullopt, Term{predicate}, object))
        out.push_back(std::move(t.subject));
    return out;
}

Graph assert_triple(Graph graph, const Triple &triple) {
    graph.insert(triple);
    return graph;
}

Graph retract_triple(Graph graph, const Triple &triple) {
    graph.erase(triple);
    return graph;
}

std::shared_ptr<const Graph> SharedGraph::snapshot() const {
    std::shared_lock lock(mutex_);
    return current_;
}

void SharedGraph::update(const std::function<void(Graph &)> &mutate) {
    std::lock_guard writer(writer_);
    auto next = std::make_shared<Graph>(*snapshot());
    mutate(*next);
    std::unique_lock lock(mutex_);
    current_ = std::move(next);
}

// ---------------------------------------------------------------------------
// BGP evaluation

namespace {

struct Evaluator {
    const Graph &graph;
    const std::vector<TriplePattern> &patterns;
    std::vector<Binding> &out;

    const Term *resolve(const Term &t, const Binding &b) const {
        if (const auto *v = std::get_if<Variable>(&t)) {
            auto it = b.find(v->name);
            return it == b.end() ? nullptr : &it->second;
        }
        return &t;
    }

    int bound_count(const TriplePattern &p, const Binding &b) const {
        return (resolve(p.subject, b) ? 1 : 0) + (resolve(p.predicate, b) ? 1 : 0) +
               (resolve(p.object, b) ? 1 : 0);
    }

    static bool unify(const Term &pattern, const Term &value, Binding &b) {
        if (const auto *v = std::get_if<Variable>(&pattern)) {
            auto [it, inserted] = b.try_emplace(v->name, value);
            return inserted || it->second == value;
        }
        return pattern == value;
    }

    void run(std::vector<bool> &done, std::size_t remaining, Binding &binding) {
        if (remaining == 0) {
            out.push_back(binding);
            return;
        }
        // Most-bound pattern first; original order breaks ties.
        std::size_t pick = patterns.size();
        int best = -1;
        for (std::size_t i = 0; i < patterns.size(); ++i) {
            if (done[i])
                continue;
            int c = bound_count(patterns[i], binding);
            if (c > best) {
                best = c;
                pick = i;
            }
        }
        const TriplePattern &p = patterns[pick];
        auto opt = [&](const Term &t) -> std::optional<Term> {
            if (const Term *r = resolve(t, binding))
                return *r;
            return std::nullopt;
        };
        const std::vector<Triple> candidates =
            graph.match(opt(p.subject), opt(p.predicate), opt(p.object));
        done[pick] = true;
        for (const Triple &t : candidates) {
            Binding next = binding;
            if (unify(p.subject, Term{t.subject}, next) &&
                unify(p.predicate, Term{t.predicate}, next) && unify(p.object, t.object, next)) {
                run(done, remaining - 1, next);
            }
        }
        done[pick] = false;
    }
};

} // namespace

std::vector<Binding> query(const Graph &graph, const Query &q) {
    std::vector<Binding> solutions;
    {
        Evaluator ev{graph, q.where, solutions};
        std::vector<bool> done(q.where.size(), false);
        Binding empty;
        ev.run(done, q.where.size(), empty);
    }

    std::vector<std::string> columns = q.select;
    if (columns.empty()) {
        std::set<std::string> names;
        for (const TriplePattern &p : q.where)
            for (const Term *t : {&p.subject, &p.predicate, &p.object})
                if (const auto *v = std::get_if<Variable>(t))
                    names.insert(v->name);
        columns.assign(names.begin(), names.end());
    }

    std::vector<std::vector<Term>> rows;
    rows.reserve(solutions.size());
    for (const Binding &b : solutions) {
        std::vector<Term> row;
        for (const std::string &c : columns) {
            auto it = b.find(c);
            row.push_back(it == b.end() ? Term{Literal{}} : it->second);
        }
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end());
    if (q.distinct)
        rows.erase(std::unique(rows.begin(), rows.end()), rows.end());

    if (q.count_as)
        return {Binding{{*q.count_as, Term{count_literal(rows.size())}}}};

    std::vector<Binding> out;
    out.reserve(rows.size());
    for (std::vector<Term> &row : rows) {
        Binding b;
        for (std::size_t i = 0; i < columns.size(); ++i)
            b.emplace(columns[i], std::move(row[i]));
        out.push_back(std::move(b));
    }
    return out;
}

std::vector<Binding> query(const Graph &graph, const std::vector<TriplePattern> &patterns) {
    return query(graph, Query{patterns, {}, false, std::nullopt});
}

} // namespace plankb::kg

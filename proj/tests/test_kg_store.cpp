#include <doctest.h>

#include <random>
#include <thread>

#include "oracles.hpp"
#include "plankb/errors.hpp"
#include "plankb/kg.hpp"

using namespace plankb;
using namespace plankb::kg;
namespace v = plankb::kg::vocab;

namespace {

Graph fixture(const std::string &name) {
    return import_turtle(oracle::read_text(oracle::data_dir() / "kg" / (name + ".ttl")));
}

std::vector<Triple> linear_scan(const Graph &g, const std::optional<Term> &s, const std::optional<Term> &p,
                                const std::optional<Term> &o) {
    std::vector<Triple> out;
    for (const Triple &t : g.triples())
        if ((!s || Term{t.subject} == *s) && (!p || Term{t.predicate} == *p) && (!o || t.object == *o))
            out.push_back(t);
    return out;
}

std::vector<Triple> sorted(std::vector<Triple> v) {
    std::sort(v.begin(), v.end());
    return v;
}

Triple random_triple(std::mt19937 &rng) {
    std::uniform_int_distribution<int> pick(0, 4);
    const Iri s = onto("s" + std::to_string(pick(rng)));
    const Iri p = onto("p" + std::to_string(pick(rng) % 3));
    Term o = pick(rng) < 3 ? Term{onto("s" + std::to_string(pick(rng)))}
                           : Term{count_literal(static_cast<std::uint64_t>(pick(rng)))};
    return {s, p, o};
}

} // namespace

TEST_CASE("set semantics") {
    Graph g;
    const Triple t{onto("domain-bw"), v::type(), v::PlanningDomain()};
    CHECK(g.insert(t));
    CHECK_FALSE(g.insert(t));
    CHECK(g.size() == 1);
    CHECK_FALSE(g.erase({onto("x"), v::type(), v::Action()}));
    CHECK(g.size() == 1);
    CHECK(g.match(Term{t.subject}, std::nullopt, std::nullopt) == std::vector<Triple>{t});
    CHECK(g.match(std::nullopt, Term{t.predicate}, std::nullopt) == std::vector<Triple>{t});
    CHECK(g.match(std::nullopt, std::nullopt, t.object) == std::vector<Triple>{t});
    CHECK_THROWS_AS(g.insert({onto("x"), v::type(), var("y")}), VariableInData);
}

TEST_CASE("functional updates leave the input intact") {
    const Graph empty;
    const Triple t{onto("a"), v::label(), string_literal("a")};
    const Graph one = assert_triple(empty, t);
    CHECK(empty.empty());
    CHECK(one.size() == 1);
    CHECK(retract_triple(one, t).empty());
    CHECK(one.size() == 1);
}

TEST_CASE("indexes agree with a linear scan under random updates") {
    std::mt19937 rng(7);
    Graph g;
    for (int step = 0; step < 2000; ++step) {
        const Triple t = random_triple(rng);
        if (rng() % 3 == 0)
            g.erase(t);
        else
            g.insert(t);
        if (step % 50 != 0)
            continue;
        const Triple probe = random_triple(rng);
        const std::optional<Term> s = Term{probe.subject}, p = Term{probe.predicate}, o = probe.object;
        for (int mask = 0; mask < 8; ++mask) {
            const auto ss = mask & 1 ? s : std::nullopt;
            const auto pp = mask & 2 ? p : std::nullopt;
            const auto oo = mask & 4 ? o : std::nullopt;
            CHECK(sorted(g.match(ss, pp, oo)) == linear_scan(g, ss, pp, oo));
        }
    }
}

TEST_CASE("BGP queries") {
    const Graph bw = fixture("blocksworld");
    const auto actions = query(bw, {{var("a"), v::type(), v::Action()}});
    CHECK(actions.size() == 4);

    CHECK(query(bw, {{var("a"), v::type(), onto("NoSuchClass")}}).empty());

    const Graph ipc = fixture("ipc");
    Query join{{{var("p"), v::ofPlannerType(), var("t")}, {var("t"), v::type(), v::PlannerType()}}, {}, false, {}};
    CHECK(query(ipc, join) == oracle::nested_loop(ipc, join));
    CHECK(query(ipc, join).size() == 7);

    Query counted{{{var("r"), v::hasRelevance(), var("tier")}}, {"tier"}, true, "n"};
    CHECK(query(ipc, counted) == oracle::nested_loop(ipc, counted));
}

TEST_CASE("queries agree with the nested-loop oracle on random graphs") {
    std::mt19937 rng(11);
    for (int round = 0; round < 40; ++round) {
        Graph g;
        for (int i = 0; i < 60; ++i)
            g.insert(random_triple(rng));
        auto term = [&](const char *name) -> Term {
            switch (rng() % 3) {
            case 0: return var(name);
            case 1: return onto("s" + std::to_string(rng() % 5));
            default: return var("x");
            }
        };
        Query q;
        const int n = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < n; ++i)
            q.where.push_back({term("a"), Term{onto("p" + std::to_string(rng() % 3))}, term("b")});
        q.distinct = rng() % 2;
        if (rng() % 4 == 0)
            q.count_as = "n";
        CHECK(query(g, q) == oracle::nested_loop(g, q));
    }
}

TEST_CASE("Turtle round trip") {
    for (const std::string name : {"blocksworld", "gripper", "driverlog", "trap", "ipc"}) {
        const Graph g = fixture(name);
        CHECK(import_turtle(export_turtle(g)) == g);
    }
    const std::string empty = export_turtle(Graph{});
    for (std::size_t pos = 0, next; pos < empty.size(); pos = next + 1) {
        next = empty.find('\n', pos);
        const std::string line = empty.substr(pos, next - pos);
        CHECK((line.empty() || line.rfind("@prefix", 0) == 0));
    }
    CHECK(fixture("sample").size() == 5);
}

TEST_CASE("Turtle literals and escapes survive") {
    Graph g;
    g.insert({onto("x"), v::label(), string_literal("quote \" backslash \\ newline \n tab \t")});
    g.insert({onto("x"), v::hasPlanCost(), count_literal(0)});
    g.insert({onto("x"), v::hasSolvedPercentage(), decimal_literal("35.00")});
    g.insert({onto("x"), onto("weight"), integer_literal(-3)});
    CHECK(import_turtle(export_turtle(g)) == g);
}

TEST_CASE("Turtle syntax errors carry a position") {
    try {
        import_turtle("@prefix plan: <https://purl.org/ai4s/ontology/planning#> .\nplan:a plan:b .\n");
        FAIL("expected TurtleSyntaxError");
    } catch (const TurtleSyntaxError &e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(import_turtle("undeclared:a undeclared:b undeclared:c ."), TurtleSyntaxError);
}

TEST_CASE("shared graph snapshots are isolated from later writes") {
    SharedGraph shared;
    const auto before = shared.snapshot();
    std::thread writer([&] {
        for (int i = 0; i < 100; ++i)
            shared.update([i](Graph &g) { g.insert({onto("n" + std::to_string(i)), v::type(), v::Action()}); });
    });
    std::thread reader([&] {
        for (int i = 0; i < 100; ++i) {
            const auto snap = shared.snapshot();
            CHECK(snap->size() <= 100);
        }
    });
    writer.join();
    reader.join();
    CHECK(before->empty());
    CHECK(shared.snapshot()->size() == 100);
}

TEST_CASE("ontology schema roster") {
    const auto &schema = OntologySchema::instance();
    CHECK(schema.classes().size() == 19);
    CHECK(schema.object_properties().size() == 25);
    Graph g;
    g.insert_all(schema.triples());
    CHECK(g.contains({v::InitialState(), Iri{std::string(kRdfsNs) + "subClassOf"}, v::State()}));
    CHECK(g.contains({v::GoalState(), Iri{std::string(kRdfsNs) + "subClassOf"}, v::State()}));
    CHECK(query(g, {{var("c"), v::type(), Iri{std::string(kOwlNs) + "Class"}}}).size() == 19);
}

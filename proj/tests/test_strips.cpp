#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "plankb/errors.hpp"
#include "plankb/strips.hpp"

using namespace plankb;

namespace {

strips::GroundAction act(const pddl::DomainDef &d, const pddl::ProblemDef &p, const std::string &schema,
                         std::vector<std::string> args) {
    auto a = strips::instantiate(d, p, schema, args);
    REQUIRE(a.has_value());
    return *a;
}

} // namespace

TEST_CASE("grounding counts match brute-force enumeration") {
    const auto bw = oracle::domain("blocksworld");
    const auto fig = oracle::problem("blocksworld", "figure");
    // 3 pick-up + 3 put-down + 9 stack + 9 unstack.
    CHECK(strips::ground(bw, fig).size() == 24);
    CHECK(oracle::enumerate_actions(bw, fig).size() == 24);

    const auto gr = oracle::domain("gripper");
    const auto g1 = oracle::problem("gripper", "p01");
    // move: 2 x 2 rooms; pick, drop: 2 balls x 2 rooms x 2 grippers each.
    CHECK(strips::ground(gr, g1).size() == 20);
    CHECK(oracle::enumerate_actions(gr, g1).size() == 20);

    for (const std::string name : {"driverlog", "trap"})
        for (const auto &stem : oracle::problem_stems(name)) {
            const auto d = oracle::domain(name);
            const auto p = oracle::problem(name, stem);
            std::vector<std::pair<std::string, std::vector<std::string>>> ours, ref;
            for (const auto &a : strips::ground(d, p))
                ours.emplace_back(a.schema, a.args());
            for (const auto &a : oracle::enumerate_actions(d, p))
                ref.emplace_back(a.schema, a.args);
            std::sort(ours.begin(), ours.end());
            std::sort(ref.begin(), ref.end());
            CHECK(ours == ref);
        }
}

TEST_CASE("0-parameter action grounds once") {
    const auto d = pddl::parse_domain(
        "(define (domain d) (:predicates (p)) (:action a :parameters () :precondition (p) :effect (not (p))))");
    const auto p = pddl::parse_problem("(define (problem q) (:domain d) (:init (p)) (:goal (and)))", d);
    CHECK(strips::ground(d, p).size() == 1);
}

TEST_CASE("grounding a problem of another domain") {
    const auto d = oracle::domain("blocksworld");
    auto p = oracle::problem("blocksworld", "figure");
    p.domain_name = "gripper";
    CHECK_THROWS_AS(strips::ground(d, p), DomainProblemMismatch);
}

TEST_CASE("applicability and application") {
    const auto d = oracle::domain("blocksworld");
    const auto p = oracle::problem("blocksworld", "figure");
    const auto s = strips::make_state(p.init);
    const auto unstack = act(d, p, "unstack", {"b2", "b1"});
    CHECK(strips::applicable(s, unstack));
    CHECK_FALSE(strips::applicable(strips::State{}, unstack));

    const auto next = strips::apply(s, unstack);
    CHECK(next.count({"on", {"b2", "b1"}}) == 0);
    CHECK(next.count({"holding", {"b2"}}) == 1);
    CHECK(oracle::to_text(next) == oracle::successor(oracle::initial(p), *oracle::bind(d, p, "unstack", {"b2", "b1"})));

    CHECK_THROWS_AS(strips::apply(s, act(d, p, "stack", {"b1", "b3"})), NotApplicable);
}

TEST_CASE("empty effect leaves the state unchanged") {
    const auto d = pddl::parse_domain(
        "(define (domain d) (:predicates (p)) (:action a :parameters () :precondition (p) :effect (and)))");
    const auto p = pddl::parse_problem("(define (problem q) (:domain d) (:init (p)) (:goal (and)))", d);
    const auto s = strips::make_state(p.init);
    CHECK(strips::apply(s, strips::ground(d, p).at(0)) == s);
}

TEST_CASE("add wins over delete") {
    const auto d = pddl::parse_domain("(define (domain d) (:predicates (p)) (:action a :parameters () "
                                      ":precondition (and) :effect (and (p) (not (p)))))");
    const auto p = pddl::parse_problem("(define (problem q) (:domain d) (:init) (:goal (p)))", d);
    CHECK(strips::apply({}, strips::ground(d, p).at(0)).count({"p", {}}) == 1);
}

TEST_CASE("plan validation") {
    const auto d = oracle::domain("blocksworld");
    const auto p = oracle::problem("blocksworld", "figure");
    const auto plan = strips::parse_plan(oracle::read_text(oracle::data_dir() / "plans/blocksworld/figure.plan"), d, p);
    const auto ok = strips::validate_plan(d, p, plan);
    CHECK(ok.valid);
    CHECK(ok.cost == plan.steps.size());

    auto swapped = plan.steps;
    std::swap(swapped[1], swapped[2]);
    const auto bad = strips::validate_plan(d, p, strips::Plan::from_steps(swapped));
    CHECK_FALSE(bad.valid);
    REQUIRE(bad.failed_step.has_value());
    CHECK(*bad.failed_step == 1);

    const auto trivial = pddl::parse_problem(
        "(define (problem t) (:domain blocksworld) (:objects a) (:init (clear a) (ontable a) (handempty)) "
        "(:goal (clear a)))", d);
    const auto empty = strips::validate_plan(d, trivial, strips::Plan{});
    CHECK(empty.valid);
    CHECK(empty.cost == 0);
}

TEST_CASE("plan files and printing") {
    const auto d = oracle::domain("blocksworld");
    const auto p = oracle::problem("blocksworld", "sussman");
    const auto plan = strips::parse_plan("; a comment\n(UNSTACK c a)\n\n(put-down c)\n", d, p);
    REQUIRE(plan.steps.size() == 2);
    CHECK(plan.steps[0].to_string() == "(unstack c a)");
    CHECK(strips::parse_plan(strips::print_plan(plan), d, p) == plan);
    CHECK_THROWS_AS(strips::parse_plan("(fly c a)\n", d, p), UnknownAction);
}

TEST_CASE("validate_plan agrees with a naive simulator on every fixture plan") {
    for (const std::string name : {"blocksworld", "gripper", "driverlog", "trap"}) {
        const auto d = oracle::domain(name);
        for (const auto &stem : oracle::problem_stems(name)) {
            const auto p = oracle::problem(name, stem);
            const auto plan = strips::parse_plan(
                oracle::read_text(oracle::data_dir() / "plans" / name / (stem + ".plan")), d, p);
            std::vector<std::pair<std::string, std::vector<std::string>>> steps;
            for (const auto &s : plan.steps)
                steps.emplace_back(s.schema, s.args());
            CHECK(strips::validate_plan(d, p, plan).valid == oracle::simulate(d, p, steps));
            // Every prefix that drops the final step must fail the goal in both.
            if (!steps.empty()) {
                auto prefix = steps;
                prefix.pop_back();
                auto cut = plan.steps;
                cut.pop_back();
                CHECK(strips::validate_plan(d, p, strips::Plan::from_steps(cut)).valid ==
                      oracle::simulate(d, p, prefix));
            }
        }
    }
}

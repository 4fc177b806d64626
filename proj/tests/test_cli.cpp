#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "plankb/cli.hpp"
#include "plankb/macro.hpp"
#include "plankb/search.hpp"

using namespace plankb;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string &rel) { return (oracle::data_dir() / rel).string(); }

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("plankb-cli-" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string &name) const { return (path / name).string(); }
};

kg::Graph graph(const std::string &path) { return kg::import_turtle(oracle::read_text(path)); }

} // namespace

TEST_CASE("help, version and usage errors") {
    CHECK(run({"--help"}).code == cli::kExitOk);
    CHECK(run({"--help"}).out.find("select-planner") != std::string::npos);
    CHECK(run({"--version"}).out == "plankb 0.1.0\n");
    CHECK(run({}).code == cli::kExitUsage);

    const auto bogus = run({"bogus"});
    CHECK(bogus.code == cli::kExitUsage);
    CHECK(bogus.err.find("unknown subcommand 'bogus'") != std::string::npos);

    CHECK(run({"query", "--format", "xml", data("kg/sample.ttl")}).code == cli::kExitUsage);
    CHECK(run({"select-planner", data("kg/ipc.ttl")}).code == cli::kExitUsage);
    CHECK(run({"solve", data("domains/blocksworld.pddl"), data("problems/blocksworld/p01.pddl"), "--algo",
               "dfs"})
              .code == cli::kExitUsage);
}

TEST_CASE("library errors exit with 1 and name the kind") {
    TempDir tmp;
    {
        std::ofstream f(tmp / "bad.pddl");
        f << "(define (domain d)\n  (:predicates (p)\n";
    }
    const auto r = run({"parse", tmp / "bad.pddl"});
    CHECK(r.code == cli::kExitDomainError);
    CHECK(r.err.rfind("error: SyntaxError: ", 0) == 0);
    CHECK(r.err.find("bad.pddl: 3:") != std::string::npos);

    CHECK(run({"parse", tmp / "missing.pddl"}).code == cli::kExitDomainError);
    CHECK(run({"query", "--id", "C99", data("kg/blocksworld.ttl")}).err.find("UnknownQueryId") !=
          std::string::npos);
    CHECK(run({"select-planner", "--domain", "nosuchdomain", data("kg/ipc.ttl")}).code ==
          cli::kExitDomainError);
}

TEST_CASE("parse prints the canonical form") {
    const auto r = run({"parse", data("domains/gripper.pddl")});
    CHECK(r.code == 0);
    CHECK(r.out == pddl::print_domain(oracle::domain("gripper")));
}

TEST_CASE("build-kg equals the library mapping") {
    TempDir tmp;
    std::vector<std::string> args{"build-kg", data("domains/gripper.pddl")};
    for (const auto &stem : oracle::problem_stems("gripper"))
        args.push_back(data("problems/gripper/" + stem + ".pddl"));
    args.insert(args.end(), {"--plans", data("plans/gripper"), "--planner", "builtin-bfs", "-o", tmp / "g.ttl",
                             "--json-out", tmp / "g.json"});
    const auto r = run(args);
    REQUIRE(r.code == 0);
    CHECK(r.err.find("wrote ") == 0);

    mapper::Bundle b;
    b.domain = oracle::domain("gripper");
    for (const auto &stem : oracle::problem_stems("gripper")) {
        auto p = oracle::problem("gripper", stem);
        auto plan = strips::parse_plan(oracle::read_text(oracle::data_dir() / "plans/gripper" / (stem + ".plan")),
                                       b.domain, p);
        b.plans.push_back({p.name, "builtin-bfs", std::move(plan)});
        b.problems.push_back(std::move(p));
    }
    const kg::Graph produced = graph(tmp / "g.ttl");
    CHECK(produced == mapper::map_bundle(b));
    CHECK(mapper::from_json(nlohmann::json::parse(oracle::read_text(tmp / "g.json"))) == b);

    const auto again = run({"build-kg", "--from-json", tmp / "g.json", "-o", tmp / "h.ttl"});
    REQUIRE(again.code == 0);
    CHECK(graph(tmp / "h.ttl") == produced);
}

TEST_CASE("query output matches the library in every format") {
    const kg::Graph g = graph(data("kg/blocksworld.ttl"));
    const auto rows = mapper::run_competency(g, "C3", {{"domain", "blocksworld"}});

    const auto j = run({"query", "--id", "C3", "--arg", "domain=blocksworld", data("kg/blocksworld.ttl"),
                        "--format", "json"});
    REQUIRE(j.code == 0);
    const auto doc = nlohmann::json::parse(j.out);
    REQUIRE(doc["rows"].size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        CHECK(doc["rows"][i]["action"] == std::get<kg::Iri>(rows[i].at("action")).value);

    const auto t = run({"query", "--id", "C3", "--arg", "domain=blocksworld", data("kg/blocksworld.ttl")});
    CHECK(t.out.rfind("?action\n", 0) == 0);
    CHECK(t.out.find("(4 rows)") != std::string::npos);

    const auto c = run({"query", "--id", "C7", "--arg", "domain=blocksworld", "--arg", "action=unstack",
                        data("kg/blocksworld.ttl"), "--format", "csv"});
    CHECK(c.out == "count\n2\n");

    CHECK(run({"query", "--list"}).out.find("C10") != std::string::npos);
}

TEST_CASE("select-planner matches the library") {
    const kg::Graph g = graph(data("kg/ipc.ttl"));
    const auto expected = select::select_ontology(g, mapper::domain_iri("floortile"), select::planners_in(g));
    const auto r = run({"select-planner", "--domain", "floortile", data("kg/ipc.ttl"), "--format", "json"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["iri"] == expected.chosen.value);
    CHECK(doc["policy"] == "ontology");

    const auto rnd = select::select_random(select::planners_in(g), 11);
    const auto rr = run({"select-planner", "--domain", "floortile", "--policy", "random", "--seed", "11",
                         data("kg/ipc.ttl"), "--format", "json"});
    CHECK(nlohmann::json::parse(rr.out)["iri"] == rnd.chosen.value);

    const auto restricted = run({"select-planner", "--domain", "parking", "--candidates", "lmcut,bjolp",
                                 data("kg/ipc.ttl")});
    CHECK(restricted.out.find("planner:   lmcut") == 0);
}

TEST_CASE("mine-macros, augment and bench chain through files") {
    TempDir tmp;
    const auto mined = run({"mine-macros", "--domain", "blocksworld", data("kg/blocksworld.ttl"), "-o",
                            tmp / "macros.json", "--store-to", tmp / "stored.ttl"});
    REQUIRE(mined.code == 0);
    CHECK(mined.out.find("pick-up * stack") != std::string::npos);

    const auto d = oracle::domain("blocksworld");
    const auto library = macro::report_json("blocksworld", macro::mine_and_compose(graph(data("kg/blocksworld.ttl")), d));
    CHECK(nlohmann::json::parse(oracle::read_text(tmp / "macros.json")) == library);
    CHECK(kg::validate_axioms(graph(tmp / "stored.ttl"), kg::ValidationMode::post_solve).empty());

    const auto aug = run({"augment", "--domain", data("domains/blocksworld.pddl"), "--macros", tmp / "macros.json",
                          "-k", "2", "-o", tmp / "aug.pddl"});
    REQUIRE(aug.code == 0);
    const auto augmented = pddl::parse_domain(oracle::read_text(tmp / "aug.pddl"));
    CHECK(augmented == macro::augment_domain(d, macro::macros_from_report(library, d), 2));

    const auto bench = run({"bench", "--domain", data("domains/blocksworld.pddl"), "--problems",
                            data("problems/blocksworld"), "--macros", tmp / "macros.json", "--format", "json"});
    REQUIRE(bench.code == 0);
    const auto doc = nlohmann::json::parse(bench.out);
    CHECK(doc["rows"].size() == 2 * oracle::problem_stems("blocksworld").size());
    const auto csv = run({"bench", "--domain", data("domains/blocksworld.pddl"), "--problems",
                          data("problems/blocksworld"), "--macros", tmp / "macros.json", "--format", "csv"});
    CHECK(csv.out.rfind("problem,variant,expanded", 0) == 0);
}

TEST_CASE("solve and validate-plan") {
    TempDir tmp;
    const auto solved = run({"solve", data("domains/blocksworld.pddl"), data("problems/blocksworld/sussman.pddl"),
                             "--algo", "breadth-first", "-o", tmp / "s.plan"});
    REQUIRE(solved.code == 0);
    CHECK(solved.err.find("status solved") != std::string::npos);
    const auto ok = run({"validate-plan", data("domains/blocksworld.pddl"),
                         data("problems/blocksworld/sussman.pddl"), tmp / "s.plan"});
    CHECK(ok.code == 0);

    {
        std::ofstream f(tmp / "bad.plan");
        f << "(pick-up a)\n";
    }
    CHECK(run({"validate-plan", data("domains/blocksworld.pddl"), data("problems/blocksworld/sussman.pddl"),
               tmp / "bad.plan"})
              .code == cli::kExitDomainError);
}

TEST_CASE("validate-kg and ontology") {
    CHECK(run({"validate-kg", data("kg/blocksworld.ttl"), "--post-solve"}).code == 0);
    const auto sample = run({"validate-kg", data("kg/sample.ttl")});
    CHECK(sample.code == cli::kExitDomainError);
    CHECK(sample.out.find("3 violations") != std::string::npos);

    const auto onto = run({"ontology"});
    REQUIRE(onto.code == 0);
    kg::Graph expected;
    expected.insert_all(kg::OntologySchema::instance().triples());
    CHECK(kg::import_turtle(onto.out) == expected);
}

TEST_CASE("ingest-ipc equals the library mapping") {
    TempDir tmp;
    const auto r = run({"ingest-ipc", data("ipc/results.csv"), "--planners", data("ipc/planners.csv"), "-o",
                        tmp / "ipc.ttl"});
    REQUIRE(r.code == 0);
    kg::Graph expected;
    expected.insert_all(mapper::map_ipc_results(
        select::read_results_csv(oracle::read_text(data("ipc/results.csv"))),
        mapper::read_planner_catalog(oracle::read_text(data("ipc/planners.csv")))));
    CHECK(graph(tmp / "ipc.ttl") == expected);
    CHECK(graph(tmp / "ipc.ttl") == graph(data("kg/ipc.ttl")));
}

TEST_CASE("relative paths resolve against the workspace") {
    ::setenv("PLANKB_WORKSPACE", oracle::data_dir().c_str(), 1);
    const auto r = run({"parse", "domains/trap.pddl"});
    ::unsetenv("PLANKB_WORKSPACE");
    CHECK(r.code == 0);
}

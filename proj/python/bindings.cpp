#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "plankb/cli.hpp"
#include "plankb/errors.hpp"
#include "plankb/kg.hpp"
#include "plankb/macro.hpp"
#include "plankb/mapper.hpp"
#include "plankb/search.hpp"
#include "plankb/select.hpp"

namespace py = pybind11;
using namespace plankb;

namespace {

std::string term_text(const kg::Term &t) {
    if (const auto *iri = std::get_if<kg::Iri>(&t))
        return iri->value;
    if (const auto *lit = std::get_if<kg::Literal>(&t))
        return lit->lexical;
    return kg::to_string(t);
}

py::dict solve(const std::string &domain_text, const std::string &problem_text, const std::string &algorithm,
               const std::string &heuristic, std::uint64_t max_expansions) {
    search::SearchConfig cfg;
    const auto a = search::parse_algorithm(algorithm);
    const auto h = search::parse_heuristic(heuristic);
    if (!a)
        throw py::value_error("unknown algorithm '" + algorithm + "'");
    if (!h)
        throw py::value_error("unknown heuristic '" + heuristic + "'");
    cfg.algorithm = *a;
    cfg.heuristic = *h;
    cfg.max_expansions = max_expansions;
    const auto d = pddl::parse_domain(domain_text);
    const auto p = pddl::parse_problem(problem_text, d);
    search::SearchResult r;
    {
        py::gil_scoped_release release;
        r = search::solve(d, p, cfg);
    }
    py::dict out;
    out["status"] = std::string(search::to_string(r.status));
    out["expanded"] = r.stats.expanded;
    out["evaluated"] = r.stats.evaluated;
    out["generated"] = r.stats.generated;
    out["cost"] = r.stats.plan_cost ? py::cast(*r.stats.plan_cost) : py::none();
    out["plan"] = r.plan ? py::cast(strips::print_plan(*r.plan)) : py::none();
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Planning knowledge graph toolkit";
    m.attr("__version__") = "0.1.0";

    py::register_exception<Error>(m, "Error", PyExc_ValueError);

    m.def(
        "run",
        [](const std::vector<std::string> &args) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = cli::dispatch(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run a command-line invocation in process; returns (exit_code, stdout, stderr).");

    m.def(
        "canonical_domain", [](const std::string &text) { return pddl::print_domain(pddl::parse_domain(text)); },
        py::arg("text"));
    m.def(
        "canonical_problem",
        [](const std::string &domain, const std::string &problem) {
            return pddl::print_problem(pddl::parse_problem(problem, pddl::parse_domain(domain)));
        },
        py::arg("domain"), py::arg("problem"));
    m.def(
        "domain_issues",
        [](const std::string &text) {
            std::vector<std::string> out;
            for (const auto &i : pddl::validate_domain(pddl::parse_domain(text)))
                out.push_back(i.location + ": " + i.detail);
            return out;
        },
        py::arg("text"));

    m.def(
        "relevance",
        [](std::uint64_t solved, std::uint64_t total) { return std::string(select::to_string(select::relevance(solved, total))); },
        py::arg("solved"), py::arg("total"));

    m.def("solve", &solve, py::arg("domain"), py::arg("problem"), py::arg("algorithm") = "greedy-best-first",
          py::arg("heuristic") = "goal-count", py::arg("max_expansions") = 2'000'000);

    m.def(
        "bundle_json",
        [](const std::string &domain, const std::vector<std::string> &problems) {
            mapper::Bundle b;
            b.domain = pddl::parse_domain(domain);
            for (const auto &p : problems)
                b.problems.push_back(pddl::parse_problem(p, b.domain));
            return mapper::to_json(b).dump();
        },
        py::arg("domain"), py::arg("problems") = std::vector<std::string>{},
        "Interchange JSON text for a domain and its problems.");

    py::class_<kg::Graph>(m, "Graph")
        .def(py::init<>())
        .def_static(
            "from_turtle", [](const std::string &text) { return kg::import_turtle(text); }, py::arg("text"))
        .def_static(
            "from_json",
            [](const std::string &text) { return mapper::map_bundle(mapper::from_json(nlohmann::json::parse(text))); },
            py::arg("text"))
        .def("to_turtle", [](const kg::Graph &g) { return kg::export_turtle(g); })
        .def("merge", &kg::Graph::merge, py::arg("other"))
        .def("__len__", &kg::Graph::size)
        .def(
            "competency",
            [](const kg::Graph &g, const std::string &id, const std::map<std::string, std::string> &args) {
                std::vector<std::map<std::string, std::string>> rows;
                for (const auto &b : mapper::run_competency(g, id, args)) {
                    std::map<std::string, std::string> row;
                    for (const auto &[k, v] : b)
                        row[k] = term_text(v);
                    rows.push_back(std::move(row));
                }
                return rows;
            },
            py::arg("id"), py::arg("args") = std::map<std::string, std::string>{})
        .def(
            "violations",
            [](const kg::Graph &g, bool post_solve) {
                std::vector<std::tuple<int, std::string, std::string>> out;
                for (const auto &v : kg::validate_axioms(
                         g, post_solve ? kg::ValidationMode::post_solve : kg::ValidationMode::pre_solve))
                    out.emplace_back(v.axiom_id, v.subject.value, v.message);
                return out;
            },
            py::arg("post_solve") = false)
        .def(
            "select_planner",
            [](const kg::Graph &g, const std::string &domain) {
                auto name = mapper::local_name(
                    select::select_ontology(g, mapper::domain_iri(domain), select::planners_in(g)).chosen);
                return name.starts_with("planner-") ? name.substr(8) : name;
            },
            py::arg("domain"))
        .def(
            "mine_macros",
            [](const kg::Graph &g, const std::string &domain_text) {
                const auto d = pddl::parse_domain(domain_text);
                return macro::report_json(d.name, macro::mine_and_compose(g, d)).dump();
            },
            py::arg("domain"), "Mined pairs and composed macros as report JSON text.");
}

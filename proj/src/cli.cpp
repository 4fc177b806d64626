#include "plankb/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "plankb/errors.hpp"
#include "plankb/kg.hpp"
#include "plankb/macro.hpp"
#include "plankb/mapper.hpp"
#include "plankb/pddl.hpp"
#include "plankb/search.hpp"
#include "plankb/select.hpp"
#include "plankb/strips.hpp"

namespace plankb::cli {

namespace fs = std::filesystem;

namespace {

fs::path resolve(const std::string &path) {
    fs::path p(path);
    if (p.is_relative()) {
        if (const char *ws = std::getenv("PLANKB_WORKSPACE"); ws != nullptr && *ws != '\0')
            return fs::path(ws) / p;
    }
    return p;
}

std::string read_file(const std::string &path) {
    std::ifstream in(resolve(path), std::ios::binary);
    if (!in)
        throw Error("IoError", "cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string &path, const std::string &text, std::ostream &out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    const fs::path target = resolve(path);
    if (target.has_parent_path())
        fs::create_directories(target.parent_path());
    std::ofstream f(target, std::ios::binary);
    if (!f || !(f << text))
        throw Error("IoError", "cannot write " + path);
}

template <class Fn>
auto with_path(const std::string &path, Fn &&load) {
    const std::string text = read_file(path);
    try {
        return load(text);
    } catch (const Error &e) {
        const std::string what = e.what();
        throw Error(e.kind(), path + ": " + what.substr(e.kind().size() + 2));
    }
}

std::string planner_name(const kg::Iri &iri) {
    std::string name = mapper::local_name(iri);
    if (name.starts_with("planner-"))
        name.erase(0, 8);
    return name;
}

pddl::DomainDef load_domain(const std::string &path) {
    return with_path(path, [](const std::string &t) { return pddl::parse_domain(t); });
}

pddl::ProblemDef load_problem(const std::string &path, const pddl::DomainDef &d) {
    return with_path(path, [&d](const std::string &t) { return pddl::parse_problem(t, d); });
}

kg::Graph load_graph(const std::string &path) {
    return with_path(path, [](const std::string &t) { return kg::import_turtle(t); });
}

std::vector<std::string> pddl_files(const std::string &dir) {
    const fs::path root = resolve(dir);
    if (!fs::is_directory(root))
        throw Error("IoError", dir + " is not a directory");
    std::vector<std::string> out;
    for (const auto &entry : fs::directory_iterator(root))
        if (entry.is_regular_file() && entry.path().extension() == ".pddl")
            out.push_back(entry.path().string());
    std::sort(out.begin(), out.end());
    if (out.empty())
        throw Error("IoError", "no .pddl files in " + dir);
    return out;
}

/// Domain by name, or verbatim when written as `<iri>`.
kg::Iri domain_ref(const std::string &name) {
    if (name.size() > 2 && name.front() == '<' && name.back() == '>')
        return kg::Iri{name.substr(1, name.size() - 2)};
    return mapper::domain_iri(name);
}

kg::Iri planner_ref(const std::string &name) {
    if (name.size() > 2 && name.front() == '<' && name.back() == '>')
        return kg::Iri{name.substr(1, name.size() - 2)};
    return mapper::planner_iri(name);
}

std::string term_text(const kg::Term &t) {
    if (const auto *iri = std::get_if<kg::Iri>(&t))
        return iri->value;
    if (const auto *lit = std::get_if<kg::Literal>(&t))
        return lit->lexical;
    return "?" + std::get<kg::Variable>(t).name;
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char c : s)
        q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

search::SearchConfig search_config(const std::string &algo, const std::string &heuristic,
                                   std::uint64_t max_expansions, double max_seconds) {
    search::SearchConfig cfg;
    auto a = search::parse_algorithm(algo);
    if (!a)
        throw CLI::ValidationError("--algo", "unknown algorithm " + algo);
    auto h = search::parse_heuristic(heuristic);
    if (!h)
        throw CLI::ValidationError("--heuristic", "unknown heuristic " + heuristic);
    cfg.algorithm = *a;
    cfg.heuristic = *h;
    cfg.max_expansions = max_expansions;
    cfg.max_seconds = max_seconds;
    return cfg;
}

struct Limits {
    std::string algo = "greedy-best-first";
    std::string heuristic = "goal-count";
    std::uint64_t max_expansions = 2'000'000;
    double max_seconds = 60.0;
};

void add_limit_options(CLI::App *cmd, Limits &l, bool with_algorithm = true) {
    if (with_algorithm) {
        cmd->add_option("--algo", l.algo, "breadth-first | greedy-best-first | a-star")
            ->capture_default_str();
        cmd->add_option("--heuristic", l.heuristic, "goal-count | zero")->capture_default_str();
    }
    cmd->add_option("--max-expansions", l.max_expansions, "Expansion budget per run")
        ->capture_default_str();
    cmd->add_option("--max-seconds", l.max_seconds, "Wall-clock budget per run")
        ->capture_default_str();
}

const search::PlannerConfig *builtin(const std::string &name) {
    static const std::vector<search::PlannerConfig> planners = search::builtin_planners();
    for (const auto &p : planners)
        if (p.name == name)
            return &p;
    return nullptr;
}

std::optional<std::string> find_plan_file(const std::string &dir, const std::string &problem_path,
                                          const std::string &problem_name) {
    const fs::path root = resolve(dir);
    const std::string stem = fs::path(problem_path).stem().string();
    for (const std::string &base : {stem, problem_name})
        for (const char *ext : {".plan", ".soln"})
            if (fs::path candidate = root / (base + ext); fs::is_regular_file(candidate))
                return candidate.string();
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Subcommands

struct ParseCmd {
    std::string domain;
    std::string problem;

    int run(std::ostream &out, std::ostream &err) const {
        const pddl::DomainDef d = load_domain(domain);
        const auto issues = pddl::validate_domain(d);
        for (const auto &issue : issues)
            err << domain << ": " << pddl::to_string(issue.code) << " in " << issue.location << ": "
                << issue.detail << '\n';
        if (!issues.empty())
            return kExitDomainError;
        out << pddl::print_domain(d);
        if (!problem.empty())
            out << '\n' << pddl::print_problem(load_problem(problem, d));
        return kExitOk;
    }
};

struct BuildKgCmd {
    std::string domain;
    std::vector<std::string> problems;
    std::string plans;
    std::string planner;
    bool solve = false;
    std::string base;
    std::string from_json;
    std::string json_out;
    bool schema = false;
    std::string output;
    Limits limits;

    int run(std::ostream &out, std::ostream &err) const {
        mapper::Bundle bundle;
        if (!from_json.empty()) {
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(read_file(from_json));
            } catch (const nlohmann::json::parse_error &e) {
                throw JsonSchemaError(from_json + ": " + e.what());
            }
            bundle = mapper::from_json(j);
        } else {
            if (domain.empty())
                throw CLI::ValidationError("build-kg", "a domain file or --from-json is required");
            bundle.domain = load_domain(domain);
            std::string planner_name = planner;
            if (planner_name.empty())
                planner_name = solve ? "builtin-bfs" : "external";
            const search::PlannerConfig *solver = nullptr;
            if (solve) {
                solver = builtin(planner_name);
                if (solver == nullptr)
                    throw Error("UnknownPlanner", "--solve needs a built-in planner, got " + planner_name);
            }
            for (const std::string &path : problems) {
                pddl::ProblemDef p = load_problem(path, bundle.domain);
                std::optional<strips::Plan> plan;
                if (!plans.empty()) {
                    if (auto file = find_plan_file(plans, path, p.name)) {
                        plan = strips::parse_plan(read_file(*file), bundle.domain, p);
                        const auto check = strips::validate_plan(bundle.domain, p, *plan);
                        if (!check.valid)
                            throw Error("InvalidPlan", *file + ": " + check.message);
                    }
                }
                if (!plan && solver != nullptr) {
                    search::SearchConfig cfg = solver->config;
                    cfg.max_expansions = limits.max_expansions;
                    cfg.max_seconds = limits.max_seconds;
                    search::SearchResult r = search::solve(bundle.domain, p, cfg);
                    if (r.plan)
                        plan = std::move(r.plan);
                    else
                        err << "warning: " << p.name << " " << search::to_string(r.status) << '\n';
                }
                if (plan)
                    bundle.plans.push_back({p.name, planner_name, std::move(*plan)});
                bundle.problems.push_back(std::move(p));
            }
        }
        kg::Graph g = base.empty() ? kg::Graph{} : load_graph(base);
        g.merge(mapper::map_bundle(bundle));
        if (schema)
            g.insert_all(kg::OntologySchema::instance().triples());
        if (!json_out.empty())
            write_output(json_out, mapper::to_json(bundle).dump(2) + "\n", out);
        write_output(output, kg::export_turtle(g), out);
        if (!output.empty() && output != "-")
            err << "wrote " << g.size() << " triples (" << bundle.problems.size() << " problems, "
                << bundle.plans.size() << " plans) to " << output << '\n';
        return kExitOk;
    }
};

struct QueryCmd {
    std::string id;
    std::vector<std::string> args;
    std::string graph;
    std::string format = "table";
    bool list = false;

    int run(std::ostream &out, std::ostream &) const {
        if (list) {
            for (const auto &q : mapper::competency_queries()) {
                out << q.id << "  " << q.question;
                if (!q.parameters.empty()) {
                    out << "  [";
                    for (std::size_t i = 0; i < q.parameters.size(); ++i)
                        out << (i ? " " : "") << q.parameters[i];
                    out << "]";
                }
                out << '\n';
            }
            return kExitOk;
        }
        if (id.empty() || graph.empty())
            throw CLI::ValidationError("query", "--id and a graph file are required");
        mapper::QueryArgs qargs;
        for (const std::string &kv : args) {
            auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0)
                throw CLI::ValidationError("--arg", "expected key=value, got " + kv);
            qargs[kv.substr(0, eq)] = kv.substr(eq + 1);
        }
        const kg::Graph g = load_graph(graph);
        const auto rows = mapper::run_competency(g, id, qargs);

        std::vector<std::string> columns;
        for (const auto &row : rows)
            for (const auto &[name, term] : row)
                if (std::find(columns.begin(), columns.end(), name) == columns.end())
                    columns.push_back(name);
        auto cell = [](const kg::Binding &row, const std::string &c) {
            auto it = row.find(c);
            return it == row.end() ? std::string() : term_text(it->second);
        };

        if (format == "json") {
            nlohmann::json j{{"id", mapper::competency(id).id},
                             {"question", mapper::competency(id).question},
                             {"columns", columns},
                             {"rows", nlohmann::json::array()}};
            for (const auto &row : rows) {
                nlohmann::json r = nlohmann::json::object();
                for (const auto &c : columns)
                    r[c] = cell(row, c);
                j["rows"].push_back(std::move(r));
            }
            out << j.dump(2) << '\n';
        } else if (format == "csv") {
            for (std::size_t i = 0; i < columns.size(); ++i)
                out << (i ? "," : "") << csv_field(columns[i]);
            out << '\n';
            for (const auto &row : rows) {
                for (std::size_t i = 0; i < columns.size(); ++i)
                    out << (i ? "," : "") << csv_field(cell(row, columns[i]));
                out << '\n';
            }
        } else {
            std::vector<std::size_t> width;
            for (const auto &c : columns)
                width.push_back(c.size() + 1);
            for (const auto &row : rows)
                for (std::size_t i = 0; i < columns.size(); ++i)
                    width[i] = std::max(width[i], cell(row, columns[i]).size());
            auto line = [&](const std::function<std::string(std::size_t)> &text) {
                for (std::size_t i = 0; i < columns.size(); ++i) {
                    std::string t = text(i);
                    out << t;
                    if (i + 1 < columns.size())
                        out << std::string(width[i] - t.size() + 2, ' ');
                }
                out << '\n';
            };
            line([&](std::size_t i) { return "?" + columns[i]; });
            for (const auto &row : rows)
                line([&](std::size_t i) { return cell(row, columns[i]); });
            out << "(" << rows.size() << " row" << (rows.size() == 1 ? "" : "s") << ")\n";
        }
        return kExitOk;
    }
};

struct IngestCmd {
    std::string results;
    std::string catalog;
    std::string base;
    std::string output;

    int run(std::ostream &out, std::ostream &err) const {
        const auto rows = select::read_results_csv(read_file(results));
        const auto planners =
            catalog.empty() ? std::vector<mapper::PlannerInfo>{} : mapper::read_planner_catalog(read_file(catalog));
        kg::Graph g = base.empty() ? kg::Graph{} : load_graph(base);
        g.insert_all(mapper::map_ipc_results(rows, planners));
        write_output(output, kg::export_turtle(g), out);
        if (!output.empty() && output != "-")
            err << "ingested " << rows.size() << " records; graph has " << g.size() << " triples\n";
        return kExitOk;
    }
};

struct SelectCmd {
    std::string domain;
    std::string policy = "ontology";
    std::uint64_t seed = 0;
    std::vector<std::string> candidates;
    std::string graph;
    std::string format = "text";

    int run(std::ostream &out, std::ostream &) const {
        const kg::Graph g = load_graph(graph);
        std::vector<kg::Iri> pool;
        for (const auto &c : candidates)
            pool.push_back(planner_ref(c));
        if (pool.empty())
            pool = select::planners_in(g);
        if (pool.empty())
            throw NoCandidates("the graph holds no Planner instances");
        const select::SelectionOutcome o = policy == "random"
                                               ? select::select_random(pool, seed)
                                               : select::select_ontology(g, domain_ref(domain), pool);
        if (format == "json") {
            nlohmann::json j{{"domain", domain},
                             {"policy", std::string(select::to_string(o.policy))},
                             {"planner", planner_name(o.chosen)},
                             {"iri", o.chosen.value},
                             {"rationale", o.rationale}};
            if (o.tier)
                j["relevance"] = std::string(select::to_string(*o.tier));
            if (o.solved)
                j["solved"] = *o.solved;
            if (o.total)
                j["total"] = *o.total;
            if (o.seed)
                j["seed"] = *o.seed;
            out << j.dump(2) << '\n';
        } else {
            out << "planner:   " << planner_name(o.chosen) << '\n'
                << "iri:       " << o.chosen.value << '\n'
                << "policy:    " << select::to_string(o.policy) << '\n'
                << "rationale: " << o.rationale << '\n';
        }
        return kExitOk;
    }
};

struct MineCmd {
    std::string domain;
    std::string graph;
    std::string pddl_path;
    std::string store_to;
    std::string output;
    std::string format = "text";

    int run(std::ostream &out, std::ostream &) const {
        const kg::Graph g = load_graph(graph);
        const kg::Iri D = domain_ref(domain);
        const pddl::DomainDef d =
            pddl_path.empty() ? mapper::domain_from_graph(g, D) : load_domain(pddl_path);
        if (mapper::domain_iri(d.name) != D)
            throw UnknownDomain("the PDDL domain " + d.name + " does not match " + D.value);
        const auto mined = macro::mine_and_compose(g, d);
        const nlohmann::json report = macro::report_json(d.name, mined);
        if (!output.empty())
            write_output(output, report.dump(2) + "\n", out);
        if (!store_to.empty()) {
            std::vector<macro::MacroSchema> macros;
            for (const auto &m : mined)
                if (m.macro)
                    macros.push_back(*m.macro);
            write_output(store_to, kg::export_turtle(macro::store_macros(g, D, macros)), out);
        }
        if (format == "json" && output.empty())
            out << report.dump(2) << '\n';
        else if (output != "-")
            out << macro::report_text(mined);
        return kExitOk;
    }
};

struct AugmentCmd {
    std::string domain;
    std::string macros;
    std::size_t k = 2;
    std::string output;

    int run(std::ostream &out, std::ostream &) const {
        const pddl::DomainDef d = load_domain(domain);
        nlohmann::json report;
        try {
            report = nlohmann::json::parse(read_file(macros));
        } catch (const nlohmann::json::parse_error &e) {
            throw JsonSchemaError(macros + ": " + e.what());
        }
        const auto schemas = macro::macros_from_report(report, d);
        write_output(output, pddl::print_domain(macro::augment_domain(d, schemas, k)), out);
        return kExitOk;
    }
};

struct BenchCmd {
    std::string domain;
    std::string problems;
    std::string macros;
    std::size_t k = 2;
    std::string format = "table";
    Limits limits;

    int run(std::ostream &out, std::ostream &) const {
        const pddl::DomainDef d = load_domain(domain);
        std::vector<pddl::ProblemDef> ps;
        for (const std::string &path : pddl_files(problems))
            ps.push_back(load_problem(path, d));
        std::vector<macro::MacroSchema> schemas;
        if (!macros.empty()) {
            nlohmann::json report;
            try {
                report = nlohmann::json::parse(read_file(macros));
            } catch (const nlohmann::json::parse_error &e) {
                throw JsonSchemaError(macros + ": " + e.what());
            }
            schemas = macro::macros_from_report(report, d);
        }
        const auto cfg = search_config(limits.algo, limits.heuristic, limits.max_expansions,
                                       limits.max_seconds);
        const search::BenchReport r = search::bench_compare(d, schemas, ps, cfg, k);
        if (format == "csv")
            out << search::bench_csv(r);
        else if (format == "json")
            out << search::bench_json(r).dump(2) << '\n';
        else
            out << search::bench_table(r);
        return kExitOk;
    }
};

struct SolveCmd {
    std::string domain;
    std::string problem;
    std::string output;
    Limits limits;

    int run(std::ostream &out, std::ostream &err) const {
        const pddl::DomainDef d = load_domain(domain);
        const pddl::ProblemDef p = load_problem(problem, d);
        const auto cfg = search_config(limits.algo, limits.heuristic, limits.max_expansions,
                                       limits.max_seconds);
        const search::SearchResult r = search::solve(d, p, cfg);
        err << "; status " << search::to_string(r.status) << ", expanded " << r.stats.expanded
            << ", evaluated " << r.stats.evaluated << ", generated " << r.stats.generated << '\n';
        if (!r.plan)
            return kExitDomainError;
        write_output(output, strips::print_plan(*r.plan), out);
        return kExitOk;
    }
};

struct ValidatePlanCmd {
    std::string domain;
    std::string problem;
    std::string plan;

    int run(std::ostream &out, std::ostream &err) const {
        const pddl::DomainDef d = load_domain(domain);
        const pddl::ProblemDef p = load_problem(problem, d);
        const strips::Plan parsed = strips::parse_plan(read_file(plan), d, p);
        const auto report = strips::validate_plan(d, p, parsed);
        if (!report.valid) {
            err << "invalid plan: " << report.message << '\n';
            return kExitDomainError;
        }
        out << "valid plan, " << parsed.steps.size() << " steps, cost " << report.cost << '\n';
        return kExitOk;
    }
};

struct ValidateKgCmd {
    std::string graph;
    bool post_solve = false;

    int run(std::ostream &out, std::ostream &) const {
        const kg::Graph g = load_graph(graph);
        const auto violations = kg::validate_axioms(
            g, post_solve ? kg::ValidationMode::post_solve : kg::ValidationMode::pre_solve);
        for (const auto &v : violations)
            out << "axiom " << v.axiom_id << "  " << v.subject.value << "  " << v.message << '\n';
        out << violations.size() << " violation" << (violations.size() == 1 ? "" : "s") << '\n';
        return violations.empty() ? kExitOk : kExitDomainError;
    }
};

struct PolicyCmd {
    std::string graph;
    std::vector<std::string> bundles;
    std::uint64_t seed = 0;
    std::string format = "table";
    Limits limits;

    int run(std::ostream &out, std::ostream &) const {
        const kg::Graph g = load_graph(graph);
        std::vector<search::DomainBundle> loaded;
        for (const std::string &spec : bundles) {
            auto colon = spec.rfind(':');
            if (colon == std::string::npos || colon == 0 || colon + 1 == spec.size())
                throw CLI::ValidationError("--bundle", "expected domain.pddl:problems-dir, got " + spec);
            search::DomainBundle b;
            b.domain = load_domain(spec.substr(0, colon));
            for (const std::string &path : pddl_files(spec.substr(colon + 1)))
                b.problems.push_back(load_problem(path, b.domain));
            loaded.push_back(std::move(b));
        }
        search::SearchConfig cfg;
        cfg.max_expansions = limits.max_expansions;
        cfg.max_seconds = limits.max_seconds;
        const auto report =
            search::policy_experiment(g, loaded, search::builtin_planners(), cfg, seed);
        if (format == "json")
            out << search::policy_json(report).dump(2) << '\n';
        else
            out << search::policy_table(report);
        return kExitOk;
    }
};

struct OntologyCmd {
    std::string output;

    int run(std::ostream &out, std::ostream &) const {
        kg::Graph g;
        g.insert_all(kg::OntologySchema::instance().triples());
        write_output(output, kg::export_turtle(g), out);
        return kExitOk;
    }
};

} // namespace

int dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Planning knowledge graph toolkit", "plankb"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "plankb 0.1.0");

    const std::vector<std::string> formats_tjc{"table", "json", "csv"};
    std::vector<std::pair<CLI::App *, std::function<int()>>> handlers;
    auto on = [&](CLI::App *cmd, auto &state) {
        handlers.emplace_back(cmd, [&state, &out, &err] { return state.run(out, err); });
    };

    ParseCmd parse;
    auto *c_parse = app.add_subcommand("parse", "Validate and pretty-print a domain (and problem)");
    c_parse->add_option("domain", parse.domain, "Domain file")->required();
    c_parse->add_option("problem", parse.problem, "Problem file");
    on(c_parse, parse);

    BuildKgCmd build;
    auto *c_build = app.add_subcommand("build-kg", "Map a domain, its problems and plans to Turtle");
    c_build->add_option("domain", build.domain, "Domain file");
    c_build->add_option("problems", build.problems, "Problem files");
    c_build->add_option("--plans", build.plans, "Directory of <problem>.plan files");
    c_build->add_option("--planner", build.planner, "Planner credited with the plans");
    c_build->add_flag("--solve", build.solve, "Solve problems without a plan file");
    c_build->add_option("--graph", build.base, "Existing graph to extend");
    c_build->add_option("--from-json", build.from_json, "Read an interchange bundle instead");
    c_build->add_option("--json-out", build.json_out, "Also write the interchange bundle");
    c_build->add_flag("--schema", build.schema, "Include the ontology declarations");
    c_build->add_option("-o,--output", build.output, "Turtle output (default stdout)");
    add_limit_options(c_build, build.limits, false);
    on(c_build, build);

    QueryCmd query;
    auto *c_query = app.add_subcommand("query", "Answer a competency question");
    c_query->add_option("--id", query.id, "C1..C10");
    c_query->add_option("--arg", query.args, "Parameter as key=value")->allow_extra_args(false);
    c_query->add_option("graph", query.graph, "Turtle graph");
    c_query->add_option("--format", query.format)->check(CLI::IsMember(formats_tjc))->capture_default_str();
    c_query->add_flag("--list", query.list, "List the questions");
    on(c_query, query);

    IngestCmd ingest;
    auto *c_ingest = app.add_subcommand("ingest-ipc", "Load competition results as performance records");
    c_ingest->add_option("results", ingest.results, "planner,domain,solved,total CSV")->required();
    c_ingest->add_option("--planners", ingest.catalog, "planner,type,requirements CSV");
    c_ingest->add_option("--graph", ingest.base, "Existing graph to extend");
    c_ingest->add_option("-o,--output", ingest.output, "Turtle output (default stdout)");
    on(c_ingest, ingest);

    SelectCmd sel;
    auto *c_sel = app.add_subcommand("select-planner", "Choose a planner for a domain");
    c_sel->add_option("--domain", sel.domain, "Domain name or <iri>")->required();
    c_sel->add_option("--policy", sel.policy)
        ->check(CLI::IsMember({"ontology", "random"}))
        ->capture_default_str();
    c_sel->add_option("--seed", sel.seed, "Seed for the random policy")->capture_default_str();
    c_sel->add_option("--candidates", sel.candidates, "Planner names (default: all in graph)")
        ->delimiter(',');
    c_sel->add_option("graph", sel.graph, "Turtle graph")->required();
    c_sel->add_option("--format", sel.format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    on(c_sel, sel);

    MineCmd mine;
    auto *c_mine = app.add_subcommand("mine-macros", "Rank adjacent action pairs and compose macros");
    c_mine->add_option("--domain", mine.domain, "Domain name or <iri>")->required();
    c_mine->add_option("graph", mine.graph, "Turtle graph with stored plans")->required();
    c_mine->add_option("--pddl", mine.pddl_path, "Domain file (default: rebuilt from the graph)");
    c_mine->add_option("--store-to", mine.store_to, "Write the graph with MacroAction nodes");
    c_mine->add_option("-o,--output", mine.output, "Write the JSON report here");
    c_mine->add_option("--format", mine.format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    on(c_mine, mine);

    AugmentCmd augment;
    auto *c_aug = app.add_subcommand("augment", "Add the top-k macros to a domain");
    c_aug->add_option("--domain", augment.domain, "Domain file")->required();
    c_aug->add_option("--macros", augment.macros, "Report from mine-macros")->required();
    c_aug->add_option("-k", augment.k, "Number of macros")->capture_default_str();
    c_aug->add_option("-o,--output", augment.output, "PDDL output (default stdout)");
    on(c_aug, augment);

    BenchCmd bench;
    auto *c_bench = app.add_subcommand("bench", "Compare the original and macro-augmented domain");
    c_bench->add_option("--domain", bench.domain, "Domain file")->required();
    c_bench->add_option("--problems", bench.problems, "Directory of problem files")->required();
    c_bench->add_option("--macros", bench.macros, "Report from mine-macros");
    c_bench->add_option("-k", bench.k, "Number of macros")->capture_default_str();
    c_bench->add_option("--format", bench.format)->check(CLI::IsMember(formats_tjc))->capture_default_str();
    add_limit_options(c_bench, bench.limits);
    on(c_bench, bench);

    SolveCmd solve;
    auto *c_solve = app.add_subcommand("solve", "Solve one problem with the built-in search");
    c_solve->add_option("domain", solve.domain, "Domain file")->required();
    c_solve->add_option("problem", solve.problem, "Problem file")->required();
    c_solve->add_option("-o,--output", solve.output, "Plan output (default stdout)");
    add_limit_options(c_solve, solve.limits);
    on(c_solve, solve);

    ValidatePlanCmd vplan;
    auto *c_vplan = app.add_subcommand("validate-plan", "Check a plan against a problem");
    c_vplan->add_option("domain", vplan.domain, "Domain file")->required();
    c_vplan->add_option("problem", vplan.problem, "Problem file")->required();
    c_vplan->add_option("plan", vplan.plan, "Plan file")->required();
    on(c_vplan, vplan);

    ValidateKgCmd vkg;
    auto *c_vkg = app.add_subcommand("validate-kg", "Check a graph against the ontology axioms");
    c_vkg->add_option("graph", vkg.graph, "Turtle graph")->required();
    c_vkg->add_flag("--post-solve", vkg.post_solve, "Also require a plan for every problem");
    on(c_vkg, vkg);

    PolicyCmd policy;
    auto *c_policy = app.add_subcommand("policy-experiment",
                                        "Ontology versus random planner choice on built-in planners");
    c_policy->add_option("graph", policy.graph, "Graph with performance records")->required();
    c_policy->add_option("--bundle", policy.bundles, "domain.pddl:problems-dir")->required();
    c_policy->add_option("--seed", policy.seed)->capture_default_str();
    c_policy->add_option("--format", policy.format)->check(CLI::IsMember({"table", "json"}))->capture_default_str();
    add_limit_options(c_policy, policy.limits, false);
    on(c_policy, policy);

    OntologyCmd onto;
    auto *c_onto = app.add_subcommand("ontology", "Print the ontology declarations as Turtle");
    c_onto->add_option("-o,--output", onto.output, "Turtle output (default stdout)");
    on(c_onto, onto);

    auto usage = [&](const std::string &message) {
        const CLI::App *context = &app;
        for (const CLI::App *sub : app.get_subcommands())
            context = sub;
        err << "error: " << message << "\n\n" << context->help();
        return kExitUsage;
    };

    if (!args.empty() && !args.front().starts_with('-') && app.get_subcommand_no_throw(args.front()) == nullptr)
        return usage("unknown subcommand '" + args.front() + "'");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        const CLI::App *context = &app;
        for (const CLI::App *sub : app.get_subcommands())
            context = sub;
        out << context->help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion &) {
        out << app.version() << '\n';
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        return usage(e.what());
    }

    for (auto &[cmd, handler] : handlers) {
        if (!cmd->parsed())
            continue;
        try {
            return handler();
        } catch (const CLI::Error &e) {
            return usage(e.what());
        } catch (const Error &e) {
            err << "error: " << e.what() << '\n';
            return kExitDomainError;
        } catch (const fs::filesystem_error &e) {
            err << "error: IoError: " << e.what() << '\n';
            return kExitDomainError;
        }
    }
    return usage("no subcommand given");
}

} // namespace plankb::cli

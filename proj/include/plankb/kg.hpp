#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace plankb::kg {

inline constexpr std::string_view kOntologyNs = "https://purl.org/ai4s/ontology/planning#";
inline constexpr std::string_view kRdfNs = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfsNs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kXsdNs = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kOwlNs = "http://www.w3.org/2002/07/owl#";

struct Iri {
    std::string value;

    friend auto operator<=>(const Iri &, const Iri &) = default;
};

struct Literal {
    std::string lexical;
    Iri datatype;

    friend auto operator<=>(const Literal &, const Literal &) = default;
};

/// Query-only placeholder; never stored.
struct Variable {
    std::string name;

    friend auto operator<=>(const Variable &, const Variable &) = default;
};

using Term = std::variant<Iri, Literal, Variable>;

/// Ontology-namespace IRI for a local name.
Iri onto(std::string_view local);
Iri rdf(std::string_view local);
Iri xsd(std::string_view local);

Literal string_literal(std::string lexical);
Literal count_literal(std::uint64_t n); // xsd:nonNegativeInteger
Literal integer_literal(std::int64_t n);
Literal decimal_literal(std::string lexical);

/// Parses a non-negative integer literal (xsd:nonNegativeInteger / xsd:integer).
std::optional<std::uint64_t> as_count(const Term &term);

std::string to_string(const Term &term);

struct Triple {
    Iri subject;
    Iri predicate;
    Term object;

    friend auto operator<=>(const Triple &, const Triple &) = default;
};

/// Set of triples with subject-, predicate- and object-keyed indexes over
/// interned term ids. A value type: copies are independent snapshots.
class Graph {
public:
    using TermId = std::uint32_t;

    /// Returns false if already present. Throws VariableInData.
    bool insert(const Triple &triple);
    bool erase(const Triple &triple);
    bool contains(const Triple &triple) const;
    void merge(const Graph &other);
    template <class Range>
    void insert_all(const Range &triples) {
        for (const Triple &t : triples)
            insert(t);
    }

    std::size_t size() const noexcept { return spo_.size(); }
    bool empty() const noexcept { return spo_.empty(); }

    /// All triples ordered by subject, predicate, object.
    std::vector<Triple> triples() const;

    /// Pattern lookup; nullopt positions are wildcards. Uses the best index.
    std::vector<Triple> match(const std::optional<Term> &subject,
                              const std::optional<Term> &predicate,
                              const std::optional<Term> &object) const;

    std::vector<Triple> by_subject(const Iri &subject) const;
    std::vector<Triple> by_predicate(const Iri &predicate) const;
    std::vector<Triple> by_object(const Term &object) const;

    /// Objects of (subject, predicate, ?).
    std::vector<Term> objects(const Iri &subject, const Iri &predicate) const;
    /// Subjects of (?, predicate, object).
    std::vector<Iri> subjects(const Iri &predicate, const Term &object) const;

    friend bool operator==(const Graph &a, const Graph &b) { return a.triples() == b.triples(); }

private:
    using Key = std::array<TermId, 3>;

    std::optional<TermId> lookup(const Term &term) const;
    TermId intern(const Term &term);
    Triple decode_spo(const Key &spo) const;
    template <class Fn>
    void scan(const std::set<Key> &index, const Key &prefix, std::size_t bound, Fn &&fn) const;

    std::vector<Term> terms_;
    std::map<Term, TermId> ids_;
    std::set<Key> spo_;
    std::set<Key> pos_;
    std::set<Key> osp_;
};

/// Functional forms: return the updated graph, leaving the input intact.
Graph assert_triple(Graph graph, const Triple &triple);
Graph retract_triple(Graph graph, const Triple &triple);

/// Snapshot holder: many readers, one writer. Writers build the next graph
/// off to the side and publish it atomically.
class SharedGraph {
public:
    SharedGraph() : current_(std::make_shared<const Graph>()) {}
    explicit SharedGraph(Graph g) : current_(std::make_shared<const Graph>(std::move(g))) {}

    std::shared_ptr<const Graph> snapshot() const;
    void update(const std::function<void(Graph &)> &mutate);

private:
    mutable std::shared_mutex mutex_;
    std::mutex writer_;
    std::shared_ptr<const Graph> current_;
};

// ---------------------------------------------------------------------------
// Basic graph pattern queries

struct TriplePattern {
    Term subject;
    Term predicate;
    Term object;
};

Variable var(std::string name);

using Binding = std::map<std::string, Term>;

struct Query {
    std::vector<TriplePattern> where;
    std::vector<std::string> select; // empty: every variable, by name
    bool distinct = false;
    std::optional<std::string> count_as; // COUNT(*) into this variable
};

/// Conjunctive BGP evaluation. Rows are ordered lexicographically by the
/// projected terms.
std::vector<Binding> query(const Graph &graph, const Query &q);
std::vector<Binding> query(const Graph &graph, const std::vector<TriplePattern> &patterns);

// ---------------------------------------------------------------------------
// Ontology vocabulary

namespace vocab {
Iri type(); // rdf:type
Iri label(); // rdfs:label

// classes
Iri PlanningDomain();
Iri DomainRequirement();
Iri ParameterType();
Iri DomainPredicate();
Iri DomainConstant();
Iri Action();
Iri ActionPrecondition();
Iri ActionEffect();
Iri Parameter();
Iri PlanningProblem();
Iri ProblemObject();
Iri State();
Iri InitialState();
Iri GoalState();
Iri Plan();
Iri Planner();
Iri PlannerType();
Iri MacroAction();
Iri PlanningTask();

// object properties
Iri hasAction();
Iri hasPredicate();
Iri hasRequirement();
Iri hasEffect();
Iri hasPrecondition();
Iri addsPredicate();
Iri deletesPredicate();
Iri hasParameter();
Iri hasParameterType();
Iri hasGoalState();
Iri hasInitialState();
Iri hasObject();
Iri hasPlan();
Iri hasPlanCost();
Iri isGeneratedBy();
Iri ofPlannerType();
Iri solvesRequirement();
Iri hasRelevance();
Iri hasDomain();
Iri hasProblem();
Iri hasActionStep();
Iri hasMacro();
Iri hasSolvedPercentage();
Iri hasActionName();
Iri hasExplanation();

// auxiliary data properties used by the mapper
Iri position();      // parameter / step ordinal
Iri fact();          // ground atom text of a state
Iri literalText();   // literal text on precondition/effect nodes
Iri polarity();      // "add" | "delete" on ActionEffect nodes
Iri parentType();
Iri arity();
Iri ofAction();      // plan step -> Action
Iri forPlanner();    // performance record -> Planner
Iri solvedCount();
Iri totalCount();
Iri firstAction();   // MacroAction -> Action
Iri secondAction();
Iri frequency();
Iri unifier();
} // namespace vocab

/// The fixed class/property roster. One instance per process.
class OntologySchema {
public:
    static const OntologySchema &instance();

    const std::vector<Iri> &classes() const noexcept { return classes_; }
    const std::vector<Iri> &object_properties() const noexcept { return properties_; }
    const std::vector<Iri> &auxiliary_properties() const noexcept { return auxiliary_; }

    /// Declarations plus InitialState/GoalState ⊑ State.
    std::vector<Triple> triples() const;

    OntologySchema(const OntologySchema &) = delete;
    OntologySchema &operator=(const OntologySchema &) = delete;

private:
    OntologySchema();

    std::vector<Iri> classes_;
    std::vector<Iri> properties_;
    std::vector<Iri> auxiliary_;
};

// ---------------------------------------------------------------------------
// Axiom validation

enum class ValidationMode { pre_solve, post_solve };

struct AxiomViolation {
    int axiom_id; // 1..13
    Iri subject;
    std::string message;

    friend auto operator<=>(const AxiomViolation &, const AxiomViolation &) = default;
};

/// Axiom 10 (problem has a plan) only applies in post-solve mode.
std::vector<AxiomViolation> validate_axioms(const Graph &graph,
                                            ValidationMode mode = ValidationMode::pre_solve);

// ---------------------------------------------------------------------------
// Turtle

std::string export_turtle(const Graph &graph);
Graph import_turtle(std::string_view text);

} // namespace plankb::kg

#pragma once

#include <compare>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace plankb::pddl {

/// Root of every type hierarchy. Untyped names carry this type.
inline constexpr std::string_view kObjectType = "object";

/// True for `?x`-style terms.
bool is_variable(std::string_view term) noexcept;

/// Requirement keywords the STRIPS grammar fully supports.
bool is_supported_requirement(std::string_view keyword) noexcept;

struct TypeName {
    std::string name;
    std::string parent{kObjectType};

    friend auto operator<=>(const TypeName &, const TypeName &) = default;
};

/// A name with a declared type: action/predicate parameters, constants, objects.
struct TypedName {
    std::string name;
    std::string type{kObjectType};

    friend auto operator<=>(const TypedName &, const TypedName &) = default;
};

/// Predicate applied to terms. Terms are variables (`?x`) or constant/object names.
struct Atom {
    std::string predicate;
    std::vector<std::string> args;

    bool is_ground() const noexcept;
    bool is_equality() const noexcept { return predicate == "="; }

    friend auto operator<=>(const Atom &, const Atom &) = default;
};

struct Literal {
    bool positive = true;
    Atom atom;

    friend auto operator<=>(const Literal &, const Literal &) = default;
};

struct PredicateSchema {
    std::string name;
    std::vector<TypedName> params;

    std::size_t arity() const noexcept { return params.size(); }

    friend auto operator<=>(const PredicateSchema &, const PredicateSchema &) = default;
};

/// Lifted STRIPS operator. Precondition is a flat conjunction; effects are
/// split into add and delete lists with add winning on overlap.
struct ActionSchema {
    std::string name;
    std::vector<TypedName> params;
    std::vector<Literal> precondition;
    std::vector<Atom> add;
    std::vector<Atom> del;

    const TypedName *find_param(std::string_view variable) const noexcept;

    friend auto operator<=>(const ActionSchema &, const ActionSchema &) = default;
};

struct DomainDef {
    std::string name;
    std::set<std::string> requirements; // keywords without the leading ':'
    std::vector<TypeName> types;
    std::vector<TypedName> constants;
    std::vector<PredicateSchema> predicates;
    std::vector<ActionSchema> actions;

    const ActionSchema *find_action(std::string_view name) const noexcept;
    const PredicateSchema *find_predicate(std::string_view name) const noexcept;
    const TypedName *find_constant(std::string_view name) const noexcept;
    bool has_type(std::string_view type) const noexcept;

    /// Reflexive-transitive subtype test over the declared hierarchy.
    bool is_subtype(std::string_view type, std::string_view ancestor) const;

    /// Requirement keywords outside the supported STRIPS subset.
    std::vector<std::string> unsupported_requirements() const;

    friend auto operator<=>(const DomainDef &, const DomainDef &) = default;
};

struct ProblemDef {
    std::string name;
    std::string domain_name;
    std::vector<TypedName> objects;
    std::vector<Atom> init;
    std::vector<Literal> goal;

    friend auto operator<=>(const ProblemDef &, const ProblemDef &) = default;
};

DomainDef parse_domain(std::string_view text);
ProblemDef parse_problem(std::string_view text, const DomainDef &domain);

DomainDef load_domain(const std::filesystem::path &path);
ProblemDef load_problem(const std::filesystem::path &path, const DomainDef &domain);

/// Canonical, byte-deterministic PDDL text.
std::string print_domain(const DomainDef &domain);
std::string print_problem(const ProblemDef &problem);

std::string to_string(const Atom &atom);
std::string to_string(const Literal &literal);

enum class IssueCode {
    DuplicateType,
    DuplicatePredicate,
    DuplicateAction,
    DuplicateConstant,
    DuplicateParameter,
    UnknownType,
    TypeCycle,
    UnknownPredicate,
    UnknownConstant,
    ArityMismatch,
    UnboundVariable,
    AddDeleteOverlap,
};

std::string_view to_string(IssueCode code) noexcept;

struct WellFormednessIssue {
    IssueCode code;
    std::string location; // e.g. "action unstack"
    std::string detail;

    friend bool operator==(const WellFormednessIssue &, const WellFormednessIssue &) = default;
};

/// Empty iff every domain and action-schema invariant holds.
std::vector<WellFormednessIssue> validate_domain(const DomainDef &domain);

} // namespace plankb::pddl

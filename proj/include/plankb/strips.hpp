#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "plankb/pddl.hpp"

namespace plankb::strips {

struct GroundAtom {
    std::string predicate;
    std::vector<std::string> args;

    std::string to_string() const;

    friend auto operator<=>(const GroundAtom &, const GroundAtom &) = default;
};

GroundAtom ground_atom(const pddl::Atom &atom); // atom must be ground

/// Closed-world state: atoms absent from the set are false.
using State = std::set<GroundAtom>;

State make_state(const std::vector<pddl::Atom> &atoms);

struct GroundAction {
    std::string schema;
    std::vector<std::pair<std::string, std::string>> binding; // parameter order
    std::vector<GroundAtom> pre_pos;
    std::vector<GroundAtom> pre_neg;
    std::vector<GroundAtom> add;
    std::vector<GroundAtom> del;
    std::uint32_t cost = 1;

    /// `(name obj1 obj2 ...)`, the solution-file spelling.
    std::string to_string() const;
    std::vector<std::string> args() const;

    friend auto operator<=>(const GroundAction &, const GroundAction &) = default;
};

struct Plan {
    std::vector<GroundAction> steps;
    std::uint64_t cost = 0;

    static Plan from_steps(std::vector<GroundAction> steps);

    friend auto operator<=>(const Plan &, const Plan &) = default;
};

/// Every type-consistent instantiation over the problem's objects plus the
/// domain's constants. Equality literals are resolved here and dropped.
/// Ordered by schema declaration, then lexicographically by bound object names.
std::vector<GroundAction> ground(const pddl::DomainDef &domain, const pddl::ProblemDef &problem);

/// Instantiates one schema with explicit arguments. Returns nullopt when the
/// static equality constraints reject the binding.
std::optional<GroundAction> instantiate(const pddl::DomainDef &domain,
                                        const pddl::ProblemDef &problem, std::string_view schema,
                                        const std::vector<std::string> &args);

bool applicable(const State &state, const GroundAction &action);

/// (state \ del) ∪ add; throws NotApplicable naming the first violated literal.
State apply(const State &state, const GroundAction &action);

/// First precondition literal violated in `state`, if any.
std::optional<std::string> first_violation(const State &state, const GroundAction &action);

bool satisfies(const State &state, const std::vector<pddl::Literal> &goal);

struct ValidationReport {
    bool valid = false;
    std::optional<std::size_t> failed_step; // 0-based; == steps.size() when only the goal fails
    std::string failed_literal;
    std::string message;
    std::uint64_t cost = 0;
};

ValidationReport validate_plan(const pddl::DomainDef &domain, const pddl::ProblemDef &problem,
                               const Plan &plan);

/// Reads the IPC solution convention: one `(name args...)` per line, `;`
/// comments and blank lines ignored. Steps are instantiated against the
/// domain so they carry full effects.
Plan parse_plan(std::string_view text, const pddl::DomainDef &domain,
                const pddl::ProblemDef &problem);

std::string print_plan(const Plan &plan);

} // namespace plankb::strips

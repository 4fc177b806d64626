#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "plankb/kg.hpp"
#include "plankb/mapper.hpp"
#include "plankb/pddl.hpp"

namespace plankb::macro {

/// Two consecutive steps of one stored plan.
struct GroundPairOccurrence {
    mapper::StepText first;
    mapper::StepText second;
    kg::Iri plan;
    std::size_t position = 0; // 0-based index of `first`
};

/// Name-level pair with the argument slots observed bound to the same object.
struct LiftedPair {
    std::string first;
    std::string second;
    /// (slot of second, slot of first), sorted by the second's slot.
    std::vector<std::pair<std::size_t, std::size_t>> unifier;
    std::uint64_t frequency = 0;

    /// `first * second`, the ranked-report spelling.
    std::string label() const;
    friend bool operator==(const LiftedPair &, const LiftedPair &) = default;
};

/// Lifts one occurrence: each slot of `second` maps to the first slot of
/// `first` holding the same object, keeping the mapping injective.
LiftedPair lift(const mapper::StepText &first, const mapper::StepText &second);

/// Aggregates adjacent pairs over a raw plan corpus. Ordered by descending
/// frequency, then by (first, second) name, then by unifier.
std::vector<LiftedPair> mine_pairs(const std::vector<std::vector<mapper::StepText>> &plans);

/// Adjacent pairs of every plan stored for `domain`.
std::vector<GroundPairOccurrence> occurrences(const kg::Graph &graph, const kg::Iri &domain);

/// Mines the stored plans of `domain`; throws NoPlansForDomain.
std::vector<LiftedPair> mine_pairs(const kg::Graph &graph, const kg::Iri &domain);

/// Whether the first action sets up the second: it adds, or leaves
/// untouched, one of the second's positive preconditions, deletes none of
/// the ones it does not re-add, and adds none of its negative preconditions.
bool chain_filter(const pddl::DomainDef &domain, const LiftedPair &pair);

struct MacroSchema {
    std::string name;
    pddl::ActionSchema action;
    LiftedPair provenance;
    /// Macro variable bound to each parameter of the first / second schema.
    std::vector<std::string> first_args;
    std::vector<std::string> second_args;
    friend bool operator==(const MacroSchema &, const MacroSchema &) = default;
};

/// Sequential composition under the pair's unifier. Parameters introduced
/// by the second action are constrained to differ from the first action's
/// parameters, so every grounding is a genuine two-step execution.
MacroSchema compose(const pddl::DomainDef &domain, const LiftedPair &pair);

/// `domain` plus the first `k` macros as ordinary actions (names made unique).
pddl::DomainDef augment_domain(const pddl::DomainDef &domain,
                               const std::vector<MacroSchema> &macros, std::size_t k = 2);

/// Adds MacroAction nodes linked to the domain and both constituent actions.
kg::Graph store_macros(kg::Graph graph, const kg::Iri &domain,
                       const std::vector<MacroSchema> &macros);

struct MinedPair {
    LiftedPair pair;
    bool chains = false;
    std::optional<MacroSchema> macro;
};

/// Mines, filters and composes in one pass.
std::vector<MinedPair> mine_and_compose(const kg::Graph &graph, const pddl::DomainDef &domain);

nlohmann::json report_json(const std::string &domain, const std::vector<MinedPair> &mined);
/// One line per pair: `first * second - frequency` plus the chain verdict.
std::string report_text(const std::vector<MinedPair> &mined);

/// Recomposes the chaining pairs listed in a report against `domain`,
/// preserving report order.
std::vector<MacroSchema> macros_from_report(const nlohmann::json &report,
                                            const pddl::DomainDef &domain);

} // namespace plankb::macro

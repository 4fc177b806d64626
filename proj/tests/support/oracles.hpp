#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "plankb/kg.hpp"
#include "plankb/macro.hpp"
#include "plankb/mapper.hpp"
#include "plankb/pddl.hpp"
#include "plankb/select.hpp"
#include "plankb/strips.hpp"

// Reference implementations used only on the test side. Each one is written
// from the definition, by brute force, without calling the code under test
// beyond plain data access.
namespace oracle {

std::filesystem::path data_dir();
std::string read_text(const std::filesystem::path &path);

plankb::pddl::DomainDef domain(const std::string &name);
plankb::pddl::ProblemDef problem(const std::string &domain, const std::string &stem);
std::vector<std::string> problem_stems(const std::string &domain);

// --- graphs -----------------------------------------------------------------

/// Evaluates patterns left to right by scanning every triple for each
/// partial binding, then projects, sorts, deduplicates and counts.
std::vector<plankb::kg::Binding> nested_loop(const plankb::kg::Graph &g, const plankb::kg::Query &q);

// --- STRIPS -----------------------------------------------------------------

using TextState = std::set<std::string>;

struct TextAction {
    std::string schema;
    std::vector<std::string> args;
    std::vector<std::string> pre_pos;
    std::vector<std::string> pre_neg;
    std::vector<std::string> add;
    std::vector<std::string> del;
};

/// Every type-consistent binding of every schema over objects and constants,
/// with equality literals evaluated. Ordered by schema then arguments.
std::vector<TextAction> enumerate_actions(const plankb::pddl::DomainDef &d,
                                          const plankb::pddl::ProblemDef &p);

/// Substitutes arguments into one schema; nullopt if an equality fails.
std::optional<TextAction> bind(const plankb::pddl::DomainDef &d, const plankb::pddl::ProblemDef &p,
                               const std::string &schema, const std::vector<std::string> &args);

TextState initial(const plankb::pddl::ProblemDef &p);
TextState to_text(const plankb::strips::State &s);
bool applicable(const TextState &s, const TextAction &a);
/// Delete first, then add.
TextState successor(const TextState &s, const TextAction &a);
bool goal_holds(const TextState &s, const plankb::pddl::ProblemDef &p);

/// Step-by-step simulation of a plan given as (schema, args) pairs.
bool simulate(const plankb::pddl::DomainDef &d, const plankb::pddl::ProblemDef &p,
              const std::vector<std::pair<std::string, std::vector<std::string>>> &plan);

struct Exhaustive {
    std::size_t reachable = 0;
    std::optional<std::uint64_t> optimum;
    bool complete = false; // false when the cap was hit
};

/// Breadth-first enumeration of the whole reachable space (up to `cap`).
Exhaustive explore(const plankb::pddl::DomainDef &d, const plankb::pddl::ProblemDef &p,
                   std::size_t cap = 100'000);

/// Every reachable state (up to `cap`).
std::vector<TextState> reachable_states(const plankb::pddl::DomainDef &d,
                                        const plankb::pddl::ProblemDef &p, std::size_t cap = 100'000);

// --- mining -----------------------------------------------------------------

using PairKey = std::tuple<std::string, std::string, std::vector<std::pair<std::size_t, std::size_t>>>;

/// Slides a window of width two over each plan. A slot of the second step is
/// paired with the lowest unused slot of the first step naming the same object.
std::map<PairKey, std::uint64_t> sliding_window(
    const std::vector<std::vector<plankb::mapper::StepText>> &plans);

struct SweepResult {
    std::size_t states = 0;
    std::size_t checked = 0; // (state, macro grounding) pairs with the macro applicable
    std::size_t counterexamples = 0;
};

/// For every reachable state of `p` under `base` and every grounding of the
/// macro whose precondition holds there: the two constituents must apply in
/// sequence and reach the same state as the macro.
SweepResult macro_sweep(const plankb::pddl::DomainDef &base, const plankb::macro::MacroSchema &m,
                        const plankb::pddl::ProblemDef &p, std::size_t cap = 100'000);

// --- selection --------------------------------------------------------------

/// Spreadsheet-style argmax: solved/total as a double, ties to the smaller name.
std::optional<std::string> spreadsheet_argmax(const std::vector<plankb::select::PlannerRecord> &rows,
                                              const std::string &domain);

} // namespace oracle

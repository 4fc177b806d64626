#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plankb/kg.hpp"

namespace plankb::select {

/// One (planner, domain) cell of a competition results table.
struct PlannerRecord {
    std::string planner;
    std::string domain;
    std::uint64_t solved = 0;
    std::uint64_t total = 0;

    friend bool operator==(const PlannerRecord &, const PlannerRecord &) = default;
};

enum class Relevance { low, medium, high };

std::string_view to_string(Relevance r) noexcept;
std::optional<Relevance> parse_relevance(std::string_view s) noexcept;

/// Throws InvalidRecord unless 0 <= solved <= total, 0 < total <= 2^31.
void check_record(const PlannerRecord &record);

/// low below 35%, medium from 35% up to (excluding) 70%, high from 70%.
/// Boundaries are compared exactly in integer arithmetic.
Relevance relevance(std::uint64_t solved, std::uint64_t total);

/// Parses `planner,domain,solved,total` CSV (header required).
std::vector<PlannerRecord> read_results_csv(std::string_view text);

enum class Policy { ontology, random };

std::string_view to_string(Policy p) noexcept;

struct SelectionOutcome {
    kg::Iri chosen;
    Policy policy = Policy::ontology;
    std::string rationale;
    std::optional<Relevance> tier;
    std::optional<std::uint64_t> solved;
    std::optional<std::uint64_t> total;
    std::optional<std::uint64_t> seed;
};

/// Argmax of the solved fraction recorded for `domain`; ties go to the
/// lexicographically smaller IRI, unrecorded candidates rank last.
SelectionOutcome select_ontology(const kg::Graph &graph, const kg::Iri &domain,
                                 const std::vector<kg::Iri> &candidates);

/// Uniform draw from mt19937_64(seed) by rejection sampling, so the choice
/// is identical on every standard library.
SelectionOutcome select_random(const std::vector<kg::Iri> &candidates, std::uint64_t seed);

std::size_t uniform_index(std::uint64_t seed, std::size_t n);

/// All `Planner` instances in the graph, sorted.
std::vector<kg::Iri> planners_in(const kg::Graph &graph);

} // namespace plankb::select

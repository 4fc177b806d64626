#include "plankb/select.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <random>

#include "plankb/errors.hpp"

namespace plankb::select {

namespace {
// Keeps every cross-multiplied comparison inside 64 bits.
constexpr std::uint64_t kMaxTotal = std::uint64_t{1} << 31;
} // namespace

std::string_view to_string(Relevance r) noexcept {
    switch (r) {
    case Relevance::low: return "low";
    case Relevance::medium: return "medium";
    case Relevance::high: return "high";
    }
    return "low";
}

std::optional<Relevance> parse_relevance(std::string_view s) noexcept {
    if (s == "low")
        return Relevance::low;
    if (s == "medium")
        return Relevance::medium;
    if (s == "high")
        return Relevance::high;
    return std::nullopt;
}

std::string_view to_string(Policy p) noexcept {
    return p == Policy::ontology ? "ontology" : "random";
}

void check_record(const PlannerRecord &r) {
    if (r.total == 0)
        throw InvalidRecord("total must be positive for (" + r.planner + ", " + r.domain + ")");
    if (r.solved > r.total)
        throw InvalidRecord("solved " + std::to_string(r.solved) + " exceeds total " +
                            std::to_string(r.total) + " for (" + r.planner + ", " + r.domain + ")");
    if (r.total > kMaxTotal)
        throw InvalidRecord("total " + std::to_string(r.total) + " is out of range");
    if (r.planner.empty() || r.domain.empty())
        throw InvalidRecord("planner and domain must be non-empty");
}

Relevance relevance(std::uint64_t solved, std::uint64_t total) {
    check_record(PlannerRecord{"-", "-", solved, total});
    // r < 0.35  <=>  100 * solved < 35 * total
    if (100 * solved < 35 * total)
        return Relevance::low;
    if (100 * solved < 70 * total)
        return Relevance::medium;
    return Relevance::high;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t p = line.find(sep, start);
        out.push_back(trim(line.substr(start, p == std::string_view::npos ? p : p - start)));
        if (p == std::string_view::npos)
            break;
        start = p + 1;
    }
    return out;
}

std::uint64_t parse_count(std::string_view s, std::size_t line) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw InvalidRecord("line " + std::to_string(line) + ": '" + std::string(s) +
                            "' is not a non-negative integer");
    return v;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

} // namespace

std::vector<PlannerRecord> read_results_csv(std::string_view text) {
    std::vector<PlannerRecord> out;
    std::size_t line_no = 0;
    bool header = false;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view line = trim(text.substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty() || line.front() == '#')
            continue;
        std::vector<std::string_view> cols = split(line, ',');
        if (!header) {
            if (cols.size() != 4 || cols[0] != "planner" || cols[1] != "domain" ||
                cols[2] != "solved" || cols[3] != "total")
                throw InvalidRecord("expected header 'planner,domain,solved,total'");
            header = true;
            continue;
        }
        if (cols.size() != 4)
            throw InvalidRecord("line " + std::to_string(line_no) + ": expected 4 columns");
        PlannerRecord r{lower(cols[0]), lower(cols[1]), parse_count(cols[2], line_no),
                        parse_count(cols[3], line_no)};
        check_record(r);
        out.push_back(std::move(r));
    }
    if (!header)
        throw InvalidRecord("expected header 'planner,domain,solved,total'");
    return out;
}

namespace {

struct Score {
    std::uint64_t solved;
    std::uint64_t total;
};

std::optional<Score> score_of(const kg::Graph &g, const kg::Iri &domain, const kg::Iri &planner) {
    using namespace kg::vocab;
    for (const kg::Iri &record : g.subjects(forPlanner(), planner)) {
        if (!g.contains(kg::Triple{record, hasDomain(), domain}))
            continue;
        auto solved = g.objects(record, solvedCount());
        auto total = g.objects(record, totalCount());
        if (solved.size() != 1 || total.size() != 1)
            continue;
        auto s = kg::as_count(solved.front());
        auto t = kg::as_count(total.front());
        if (s && t && *t > 0 && *t <= kMaxTotal && *s <= *t)
            return Score{*s, *t};
    }
    return std::nullopt;
}

std::string percent_text(const Score &s) {
    std::uint64_t basis = (s.solved * 10000 + s.total / 2) / s.total;
    std::string frac = std::to_string(basis % 100);
    if (frac.size() < 2)
        frac = "0" + frac;
    return std::to_string(basis / 100) + "." + frac + "%";
}

} // namespace

SelectionOutcome select_ontology(const kg::Graph &graph, const kg::Iri &domain,
                                 const std::vector<kg::Iri> &candidates) {
    if (candidates.empty())
        throw NoCandidates("no planners to choose from");
    std::optional<kg::Iri> best;
    Score best_score{0, 1};
    for (const kg::Iri &c : candidates) {
        auto s = score_of(graph, domain, c);
        if (!s)
            continue;
        bool better = !best;
        if (best) {
            // compare s.solved/s.total with best_score exactly
            const std::uint64_t lhs = s->solved * best_score.total;
            const std::uint64_t rhs = best_score.solved * s->total;
            better = lhs > rhs || (lhs == rhs && c < *best);
        }
        if (better) {
            best = c;
            best_score = *s;
        }
    }
    if (!best)
        throw NoDataForDomain("no candidate has results for <" + domain.value + ">");
    SelectionOutcome out;
    out.chosen = *best;
    out.policy = Policy::ontology;
    out.tier = relevance(best_score.solved, best_score.total);
    out.solved = best_score.solved;
    out.total = best_score.total;
    out.rationale = "relevance " + std::string(to_string(*out.tier)) + ", solved " +
                    std::to_string(best_score.solved) + "/" + std::to_string(best_score.total) +
                    " (" + percent_text(best_score) + ")";
    return out;
}

std::size_t uniform_index(std::uint64_t seed, std::size_t n) {
    if (n == 0)
        throw NoCandidates("no planners to choose from");
    std::mt19937_64 gen(seed);
    const std::uint64_t range = std::numeric_limits<std::uint64_t>::max();
    // Reject the top partial bucket so every index is equally likely.
    const std::uint64_t cutoff = range - ((range % n) + 1) % n;
    for (;;) {
        std::uint64_t x = gen();
        if (x <= cutoff)
            return static_cast<std::size_t>(x % n);
    }
}

SelectionOutcome select_random(const std::vector<kg::Iri> &candidates, std::uint64_t seed) {
    if (candidates.empty())
        throw NoCandidates("no planners to choose from");
    SelectionOutcome out;
    out.chosen = candidates[uniform_index(seed, candidates.size())];
    out.policy = Policy::random;
    out.seed = seed;
    out.rationale = "uniform draw, mt19937_64 seed " + std::to_string(seed) + " over " +
                    std::to_string(candidates.size()) + " candidate(s)";
    return out;
}

std::vector<kg::Iri> planners_in(const kg::Graph &graph) {
    std::vector<kg::Iri> out = graph.subjects(kg::vocab::type(), kg::vocab::Planner());
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace plankb::select

#pragma once

// Pairwise top-k elimination for small comparison sets.
//
// A random pair graph over the current candidates is queried one round at a
// time. After each round every edge gets a five-way label from its cumulative
// win ratio; i dominates j when a label-monotone walk of at most kappa edges
// containing at least one strict edge leads from i to j. Items dominated by at
// least k others are eliminated, items dominating at least m - k others are
// accepted, and once a quarter of the candidates is decided the algorithm
// recurses on the rest.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rankbench/core_model.hpp"
#include "rankbench/edge_label.hpp"

namespace rankbench {

struct PairwiseConfig {
    std::size_t kappa = 8;
    /// Labels are not trusted until q >= q_min_factor * kappa^3.
    double q_min_factor = 1.0;
    std::uint64_t max_total_queries = 10'000'000;
    std::size_t recursion_depth_cap = 64;

    /// kappa = max(8, ceil(c * ln(n)^2)).
    static std::size_t default_kappa(std::size_t n, double c = 1.0);
    static PairwiseConfig for_items(std::size_t n, double c = 1.0);

    /// Throws DomainError on kappa < 2, q_min_factor < 1 or zero caps.
    void validate() const;
};

/// Label of edge (i, j) from cumulative wins after q rounds.
/// Throws DomainError if wins_ij + wins_ji == 0 or q == 0.
EdgeLabel label_edge(std::uint64_t wins_ij, std::uint64_t wins_ji, std::uint64_t q, std::size_t kappa);

/// Thresholds 1 + 4 sqrt(kappa/q) and 1 + 32 kappa sqrt(kappa/q).
struct LabelThresholds {
    double approx;
    double strong;
    static LabelThresholds at(std::uint64_t q, std::size_t kappa);
};

/// Pair graph on local vertices 0..m-1, stored as parallel arrays so the
/// labeling kernel can stream over them. Duplicate sampled pairs are merged;
/// `multiplicity` counts how many of the s samples hit the pair.
class ComparisonGraph {
public:
    explicit ComparisonGraph(std::size_t vertices = 0) : vertices_(vertices) {}

    std::size_t vertices() const noexcept { return vertices_; }
    std::size_t edge_count() const noexcept { return from_.size(); }
    std::uint64_t rounds() const noexcept { return rounds_; }

    /// Adds edge (a, b) with its label read from a's side. a != b.
    void add_edge(std::uint32_t a, std::uint32_t b, std::uint32_t multiplicity = 1,
                  EdgeLabel label = EdgeLabel::ApproxEq);

    std::uint32_t from(std::size_t e) const { return from_[e]; }
    std::uint32_t to(std::size_t e) const { return to_[e]; }
    std::uint32_t multiplicity(std::size_t e) const { return multiplicity_[e]; }
    double wins_forward(std::size_t e) const { return wins_forward_[e]; }
    double wins_reverse(std::size_t e) const { return wins_reverse_[e]; }
    EdgeLabel label(std::size_t e) const { return static_cast<EdgeLabel>(labels_[e]); }
    void set_label(std::size_t e, EdgeLabel label) { labels_[e] = static_cast<std::uint8_t>(label); }

    /// Sum of multiplicities, i.e. the s queries of one round.
    std::uint64_t queries_per_round() const noexcept { return queries_per_round_; }

    /// Adds one round of results: `forward_wins[e]` of multiplicity(e) draws
    /// went to from(e).
    void add_round(std::span<const std::uint32_t> forward_wins);

    /// Recomputes every label from cumulative counts at the current round.
    void relabel(std::size_t kappa);

private:
    std::size_t vertices_;
    std::uint64_t rounds_ = 0;
    std::uint64_t queries_per_round_ = 0;
    std::vector<std::uint32_t> from_;
    std::vector<std::uint32_t> to_;
    std::vector<std::uint32_t> multiplicity_;
    std::vector<double> wins_forward_;
    std::vector<double> wins_reverse_;
    std::vector<std::uint8_t> labels_;
};

/// Samples s = m * kappa uniform pairs of distinct vertices and merges
/// duplicates.
ComparisonGraph sample_pair_graph(std::size_t m, std::size_t kappa, StreamRng& rng);

/// The full >>_l relation: dominates(i, j) is true iff a label-monotone walk
/// i -> ... -> j of at most kappa edges uses at least one GtStrong step.
/// Self-pairs are reported as false.
class DominanceRelation {
public:
    DominanceRelation(const ComparisonGraph& graph, std::size_t kappa);

    std::size_t size() const noexcept { return m_; }
    bool dominates(std::uint32_t i, std::uint32_t j) const;
    /// |{j != i : j >> i}|
    std::size_t dominators(std::uint32_t i) const { return dominators_[i]; }
    /// |{j != i : i >> j}|
    std::size_t dominated(std::uint32_t i) const { return dominated_[i]; }

private:
    std::size_t m_;
    std::size_t words_;
    // reach_[j * words_ + w]: bit i set iff i >> j.
    std::vector<std::uint64_t> reach_;
    std::vector<std::size_t> dominators_;
    std::vector<std::size_t> dominated_;
};

bool strictly_dominates(const ComparisonGraph& graph, std::uint32_t i, std::uint32_t j, std::size_t kappa);

/// Local vertex sets; disjoint, and together with `remaining` they cover the
/// graph's vertices.
struct PartitionResult {
    std::vector<std::uint32_t> omega_g;
    std::vector<std::uint32_t> omega_b;
    std::vector<std::uint32_t> remaining;
};

/// i in omega_b iff at least k vertices dominate it; i in omega_g iff it
/// dominates at least m - k. A vertex meeting both rules is left unclassified.
PartitionResult classify(const DominanceRelation& relation, std::size_t k);
PartitionResult classify(const ComparisonGraph& graph, std::size_t k, std::size_t kappa);

/// Returns k labels believed to be the top-k of `labels`.
/// Throws BudgetExhausted when env.queries() would exceed
/// config.max_total_queries; the partial report's last trace row holds the
/// current Omega_g / Omega_b. Appends one row per recursion level to `trace`.
std::vector<Label> alg_pairwise(Environment& env, std::span<const Label> labels, std::size_t k,
                                const PairwiseConfig& config, std::vector<TraceRow>* trace = nullptr);

}  // namespace rankbench

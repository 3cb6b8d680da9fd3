#pragma once

// Ground-truth instances, the MNL choice oracle, and query accounting.
//
// Ranks and labels are 0-based. Rank 0 is the most preferred item. An
// algorithm only ever sees labels; the permutation mapping ranks to labels is
// held by LabeledInstance and is hidden behind Environment.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rankbench/rng.hpp"

namespace rankbench {

using Rank = std::uint32_t;
using Label = std::uint32_t;

/// Bad argument to an operation whose precondition the caller controls.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An instance that violates the model's invariants.
class InvalidInstance : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Something that "cannot happen" on a correct implementation did. The CLI
/// maps this to exit code 2.
class InvariantBreach : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class Instance {
public:
    /// theta must be positive, finite and sorted descending; 1 <= k < n and
    /// 2 <= l <= n.
    Instance(std::vector<double> theta, std::size_t k, std::size_t l);

    /// Builds theta = exp(mu). mu must be sorted descending.
    static Instance from_utilities(std::span<const double> mu, std::size_t k, std::size_t l);

    std::size_t n() const noexcept { return theta_.size(); }
    std::size_t k() const noexcept { return k_; }
    std::size_t l() const noexcept { return l_; }
    std::span<const double> theta() const noexcept { return theta_; }
    double theta(Rank r) const { return theta_.at(r); }

    /// theta_k == theta_{k+1}: top-k is not uniquely defined. Accepted, but
    /// algorithms can only terminate through their query budget.
    bool has_tie() const noexcept { return theta_[k_ - 1] == theta_[k_]; }

private:
    std::vector<double> theta_;
    std::size_t k_;
    std::size_t l_;
};

/// Pr[winner | subset] = theta_winner / sum_{j in subset} theta_j.
double choice_prob(const Instance& instance, std::span<const Rank> subset, Rank winner);

class LabeledInstance {
public:
    LabeledInstance(Instance instance, std::vector<Label> pi, std::uint64_t seed);

    const Instance& instance() const noexcept { return instance_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::size_t n() const noexcept { return instance_.n(); }

    Label label_of(Rank r) const { return pi_.at(r); }
    Rank rank_of(Label label) const { return rank_.at(label); }
    std::span<const Label> pi() const noexcept { return pi_; }

    /// Labels of the true top-k, i.e. {pi[0], ..., pi[k-1]}.
    std::vector<Label> top_labels() const;
    bool is_top(Label label) const { return rank_of(label) < instance_.k(); }

    /// True iff `labels` is exactly the top-k label set.
    bool is_correct(std::span<const Label> labels) const;

private:
    Instance instance_;
    std::vector<Label> pi_;
    std::vector<Rank> rank_;
    std::uint64_t seed_;
};

/// Uniform permutation drawn from `seed` (Fisher-Yates).
LabeledInstance make_labeled(const Instance& instance, std::uint64_t seed);

struct QueryRecord {
    std::vector<Label> set;
    Label winner;
};

class QueryLedger {
public:
    std::uint64_t total_queries() const noexcept { return total_; }
    bool recording() const noexcept { return recording_; }
    const std::vector<QueryRecord>& log() const noexcept { return log_; }

private:
    friend class Environment;
    std::uint64_t total_ = 0;
    bool recording_ = false;
    std::vector<QueryRecord> log_;
};

/// The single boundary through which algorithms query the oracle. Every
/// draw is counted; draws are pure functions of (seed, stream, index).
class Environment {
public:
    explicit Environment(const LabeledInstance& truth, bool record_log = false);

    std::size_t n() const noexcept { return theta_by_label_.size(); }
    std::size_t max_set_size() const noexcept { return l_; }
    std::vector<Label> all_labels() const;

    /// One MNL draw over `set`, inverse CDF in the order given.
    Label sample_winner(std::span<const Label> set, StreamKey stream, std::uint64_t index);

    /// `times` draws over `set` using indices [first, first + times); adds
    /// each member's win count into `counts` (same order as `set`).
    /// Identical to calling sample_winner `times` times.
    void sample_counts(std::span<const Label> set, std::uint32_t times, StreamKey stream,
                       std::uint64_t first, std::span<std::uint32_t> counts);

    /// Pair fast path: number of wins for `a` over `times` draws on {a, b}.
    std::uint32_t sample_pair_wins(Label a, Label b, std::uint32_t times, StreamKey stream,
                                   std::uint64_t first);

    /// A fresh, deterministic sub-stream for algorithm-side randomness.
    StreamKey fresh_stream() noexcept { return root_.child(next_stream_++); }

    std::uint64_t queries() const noexcept { return ledger_.total_; }
    const QueryLedger& ledger() const noexcept { return ledger_; }

private:
    void check_set(std::span<const Label> set);
    void record(std::span<const Label> set, Label winner);

    std::vector<double> theta_by_label_;
    std::size_t l_;
    StreamKey root_;
    std::uint64_t next_stream_ = 0;
    QueryLedger ledger_;
    std::vector<std::uint32_t> seen_;
    std::uint32_t seen_epoch_ = 0;
};

enum class Phase : std::uint8_t { Pairwise, Multiwise };

/// One recursion level of an elimination algorithm.
struct TraceRow {
    Phase phase = Phase::Pairwise;
    std::size_t depth = 0;
    std::size_t m = 0;
    std::size_t k = 0;
    std::uint64_t rounds = 0;  ///< q for pairwise, Q for multiwise
    std::vector<Label> selected;    ///< Omega_g, or S_1 for multiwise
    std::vector<Label> eliminated;  ///< Omega_b, or items dropped by the Omega'' shrink
    std::uint64_t queries = 0;      ///< spent at this level
};

struct RunReport {
    std::vector<Label> returned_labels;
    std::uint64_t queries_used = 0;
    bool success = false;
    bool budget_exhausted = false;
    std::string algorithm;  ///< resolved: "pairwise" or "multiwise"
    std::uint64_t final_Q = 0;
    std::vector<TraceRow> trace;
};

/// True iff no trace row selects a non-top label or eliminates a top label.
bool elimination_sound(const RunReport& report, const LabeledInstance& truth);

/// Raised when a query limit would be exceeded. Carries the work done so far.
class BudgetExhausted : public std::runtime_error {
public:
    BudgetExhausted(std::string what, RunReport partial)
        : std::runtime_error(std::move(what)), partial_(std::move(partial)) {}
    const RunReport& partial() const noexcept { return partial_; }
    RunReport& partial() noexcept { return partial_; }

private:
    RunReport partial_;
};

}  // namespace rankbench

#pragma once

// Multi-wise selection for large comparison sets, and the top-k driver.
//
// Random l-subsets are each queried Q times. An item "passes" a subset when it
// won at least alpha times and at least gamma*l members of the subset won at
// most 1/beta as often. Items passing a tau fraction of their subsets form
// Omega_{beta,gamma,tau}; these sets drive a recursion that either selects
// clear winners or discards clear losers, after which the pairwise algorithm
// finishes the job. Q is found by doubling.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "rankbench/core_model.hpp"
#include "rankbench/pairwise.hpp"

namespace rankbench {

struct IndicatorParams {
    double alpha = 8.0;
    double beta = 4.0;    ///< (0, 32]
    double gamma = 1.0 / 16.0;  ///< [1/32, 1/2]
    double tau = 3.0 / 4.0;     ///< [3/4, 7/8]

    void validate() const;
};

// The tuples used by the recursion. 7/8 >= (33/32)(13/16) >= (33/32)^2 (3/4)
// is what lets each branch reuse the order-consistency guarantee.
inline constexpr double kTauSelect = 7.0 / 8.0;
inline constexpr double kTauGuard = 13.0 / 16.0;
inline constexpr double kTauKeep = 3.0 / 4.0;
static_assert(kTauSelect >= (33.0 / 32.0) * kTauGuard);
static_assert((33.0 / 32.0) * kTauGuard >= (33.0 / 32.0) * (33.0 / 32.0) * kTauKeep);

struct MultiwiseConfig {
    std::size_t kappa = 8;
    double alpha = 8.0;
    std::uint64_t Q = 1;
    /// Multi-wise is used when l >= l_threshold_factor * ceil(log2 n).
    double l_threshold_factor = 1.0;
    std::uint64_t max_total_queries = 10'000'000;
    std::uint64_t Q_cap = std::uint64_t{1} << 20;
    std::size_t recursion_depth_cap = 64;

    static MultiwiseConfig for_items(std::size_t n, double c = 1.0);
    void validate() const;
};

/// Subsets S_1..S_s over local items 0..m-1 and their win counts after q
/// queries each.
class HyperedgeSample {
public:
    HyperedgeSample(std::size_t items, std::size_t subset_size);

    std::size_t items() const noexcept { return degree_.size(); }
    std::size_t subset_size() const noexcept { return subset_size_; }
    std::size_t subsets() const noexcept { return members_.size() / subset_size_; }
    std::uint64_t q() const noexcept { return q_; }

    std::span<const std::uint32_t> members(std::size_t u) const;
    std::span<const double> wins(std::size_t u) const;
    std::span<double> wins(std::size_t u);
    /// Empirical win frequency of the member at `position` of subset u.
    double theta_tilde(std::size_t u, std::size_t position) const;
    std::uint32_t degree(std::uint32_t item) const { return degree_[item]; }

    void add_subset(std::span<const std::uint32_t> members);
    void set_q(std::uint64_t q) noexcept { q_ = q; }

private:
    std::size_t subset_size_;
    std::uint64_t q_ = 0;
    std::vector<std::uint32_t> members_;
    std::vector<double> wins_;
    std::vector<std::uint32_t> degree_;
};

/// Samples s = ceil(m * kappa / l) uniform l-subsets of `labels` (l clamped
/// to m), adds one subset for every item left uncovered, and queries each
/// subset Q times. Throws BudgetExhausted, spending nothing, if the sweep
/// would push env.queries() past `query_limit`.
HyperedgeSample basic_query(Environment& env, std::span<const Label> labels, std::size_t l,
                            std::size_t kappa, std::uint64_t Q, std::uint64_t query_limit);

/// X for the member at `position` of a subset with per-member win counts
/// `wins` after q queries: wins >= alpha (i.e. theta~ >= alpha/q) and at least
/// gamma*|subset| members j with wins_j * beta <= wins_i.
bool indicator(std::span<const double> wins, std::size_t position, const IndicatorParams& params, std::uint64_t q);

/// Per-item indicator pass counts over the subsets containing it.
std::vector<std::uint32_t> indicator_passes(const HyperedgeSample& sample, const IndicatorParams& params);

/// Omega_{beta,gamma,tau}: items with passes >= tau * degree, ascending.
std::vector<std::uint32_t> omega_set(const HyperedgeSample& sample, const IndicatorParams& params);
std::vector<std::uint32_t> omega_set(std::span<const std::uint32_t> passes, std::span<const std::uint32_t> degree,
                                     double tau);

struct MultiwiseResult {
    std::vector<Label> selected;
    std::vector<Label> remaining;
    std::size_t k_remaining = 0;
};

/// One run of the selection recursion at fixed config.Q.
MultiwiseResult alg_multiwise(Environment& env, std::span<const Label> labels, std::size_t k,
                              const MultiwiseConfig& config, std::vector<TraceRow>* trace = nullptr);

enum class Algorithm : std::uint8_t { Pairwise, Multiwise, Auto };

const char* to_string(Algorithm algorithm) noexcept;
Algorithm parse_algorithm(std::string_view name);

struct TopKConfig {
    Algorithm algorithm = Algorithm::Auto;
    PairwiseConfig pairwise;
    MultiwiseConfig multiwise;
    std::uint64_t max_total_queries = 10'000'000;

    static TopKConfig for_items(std::size_t n);
};

/// Resolves Auto: multi-wise iff l >= l_threshold_factor * ceil(log2 n).
Algorithm resolve_algorithm(std::size_t n, std::size_t l, const TopKConfig& config);

/// Full driver over all of env's labels. Multi-wise runs use Q = 1, 2, 4, ...
/// and give the pairwise phase Q * n / l queries per attempt. Throws
/// BudgetExhausted (with the partial report) when config.max_total_queries
/// runs out. The returned report's success flag is left false; only a holder
/// of the LabeledInstance can set it.
RunReport top_k(Environment& env, std::size_t k, const TopKConfig& config);

}  // namespace rankbench

#pragma once

// Independent oracles for the test suites: exact choice distributions,
// exhaustive walk enumeration for dominance, binomial concentration, and
// success-rate estimation with Wilson intervals.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rankbench/core_model.hpp"
#include "rankbench/edge_label.hpp"
#include "rankbench/harness.hpp"
#include "rankbench/multiwise.hpp"

namespace rankbench::verify {

/// Significance levels and rates shared by every statistical check.
namespace significance {
inline constexpr double kChiSquareAlpha = 0.001;
inline constexpr double kWilsonZ = 1.959963984540054;  // 95%
inline constexpr double kSoundnessRate = 0.99;
}  // namespace significance

struct TrialSummary {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double estimate = 0.0;
    double lower = 0.0;
    double upper = 1.0;
};

TrialSummary wilson_summary(std::uint64_t successes, std::uint64_t trials, double z = significance::kWilsonZ);

/// Exact MNL probabilities over `subset` (by rank), in subset order.
std::vector<double> exact_choice_distribution(const Instance& instance, std::span<const Rank> subset);

struct ChiSquareResult {
    double statistic = 0.0;
    std::size_t dof = 0;
    double p_value = 1.0;
};

/// Pearson goodness of fit of observed counts against probabilities.
ChiSquareResult chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> probabilities);

struct LabeledEdge {
    std::uint32_t a;
    std::uint32_t b;
    EdgeLabel label;  ///< read from a's side
};

inline constexpr std::size_t kBruteForceMaxVertices = 7;

/// relation[i][j] == true iff some walk i -> ... -> j of at most kappa edges
/// steps only along ~, >=, > (in walk direction) and uses at least one >.
/// Enumerates every such walk. Throws DomainError above 7 vertices.
std::vector<std::vector<bool>> brute_force_dominance(std::size_t vertices, std::span<const LabeledEdge> edges,
                                                     std::size_t kappa);

struct BinomialCheck {
    std::size_t trials = 0;
    std::size_t inside = 0;
    double pass_rate = 0.0;
    bool passed = false;
};

/// Draws X ~ B(m, p) `trials` times and checks that
/// X in [mp - C sqrt(mp ln n), mp + C sqrt(mp ln n)] at rate >= 1 - 1/n.
BinomialCheck binomial_bounds_check(std::uint64_t m, double p, double C, std::size_t n, std::size_t trials,
                                    std::uint64_t seed);

/// Runs top_k once per seed and counts exact top-k recoveries. Budget
/// exhaustion and internal errors count as failures.
TrialSummary estimate_success(const Instance& instance, const TopKConfig& config,
                              std::span<const std::uint64_t> seeds, std::vector<RunOutcome>* outcomes = nullptr,
                              std::size_t threads = 0);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace rankbench::verify

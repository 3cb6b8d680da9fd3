#include "rankbench/multiwise.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rankbench/kernels.hpp"

namespace rankbench {

void IndicatorParams::validate() const {
    if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
    if (!(beta > 0.0 && beta <= 32.0)) throw DomainError("beta must lie in (0, 32]");
    if (!(gamma >= 1.0 / 32.0 && gamma <= 0.5)) throw DomainError("gamma must lie in [1/32, 1/2]");
    if (!(tau >= 0.75 && tau <= 0.875)) throw DomainError("tau must lie in [3/4, 7/8]");
}

MultiwiseConfig MultiwiseConfig::for_items(std::size_t n, double c) {
    MultiwiseConfig config;
    config.kappa = PairwiseConfig::default_kappa(n, c);
    config.alpha = static_cast<double>(config.kappa);
    return config;
}

void MultiwiseConfig::validate() const {
    if (kappa < 2) throw DomainError("kappa must be at least 2");
    if (!(alpha >= static_cast<double>(kappa))) throw DomainError("alpha must be at least kappa");
    if (Q < 1) throw DomainError("Q must be at least 1");
    if (!(l_threshold_factor > 0.0)) throw DomainError("l_threshold_factor must be positive");
    if (max_total_queries == 0 || Q_cap == 0 || recursion_depth_cap == 0) {
        throw DomainError("multiwise caps must be positive");
    }
}

HyperedgeSample::HyperedgeSample(std::size_t items, std::size_t subset_size)
    : subset_size_(subset_size), degree_(items, 0) {
    if (subset_size < 2 || subset_size > items) throw DomainError("subset size must lie in [2, m]");
}

std::span<const std::uint32_t> HyperedgeSample::members(std::size_t u) const {
    return std::span<const std::uint32_t>(members_).subspan(u * subset_size_, subset_size_);
}

std::span<const double> HyperedgeSample::wins(std::size_t u) const {
    return std::span<const double>(wins_).subspan(u * subset_size_, subset_size_);
}

std::span<double> HyperedgeSample::wins(std::size_t u) {
    return std::span<double>(wins_).subspan(u * subset_size_, subset_size_);
}

double HyperedgeSample::theta_tilde(std::size_t u, std::size_t position) const {
    if (q_ == 0) return 0.0;
    return wins(u)[position] / static_cast<double>(q_);
}

void HyperedgeSample::add_subset(std::span<const std::uint32_t> members) {
    if (members.size() != subset_size_) throw DomainError("subset has the wrong size");
    for (std::uint32_t item : members) {
        if (item >= degree_.size()) throw DomainError("subset member out of range");
        ++degree_[item];
    }
    members_.insert(members_.end(), members.begin(), members.end());
    wins_.resize(members_.size(), 0.0);
}

HyperedgeSample basic_query(Environment& env, std::span<const Label> labels, std::size_t l,
                            std::size_t kappa, std::uint64_t Q, std::uint64_t query_limit) {
    const std::size_t m = labels.size();
    if (m < 2) throw DomainError("basic_query needs at least two items");
    if (l < 2) throw DomainError("subset size must be at least 2");
    if (Q < 1) throw DomainError("Q must be at least 1");
    const std::size_t size = std::min(l, m);
    const std::size_t s = (m * kappa + size - 1) / size;

    const StreamKey key = env.fresh_stream();
    StreamRng rng(key.child(0));
    HyperedgeSample sample(m, size);

    // Partial Fisher-Yates on a persistent permutation: each prefix is a
    // uniform subset whatever the starting order.
    std::vector<std::uint32_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0U);
    for (std::size_t u = 0; u < s; ++u) {
        for (std::size_t i = 0; i < size; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.below(m - i));
            std::swap(perm[i], perm[j]);
        }
        sample.add_subset(std::span<const std::uint32_t>(perm).first(size));
    }
    for (std::uint32_t item = 0; item < m; ++item) {
        if (sample.degree(item) != 0) continue;
        // Move the isolated item to the front, then fill the rest uniformly.
        std::swap(perm[0], *std::find(perm.begin(), perm.end(), item));
        for (std::size_t i = 1; i < size; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.below(m - i));
            std::swap(perm[i], perm[j]);
        }
        sample.add_subset(std::span<const std::uint32_t>(perm).first(size));
    }

    const std::uint64_t cost = static_cast<std::uint64_t>(sample.subsets()) * Q;
    if (env.queries() + cost > query_limit) {
        RunReport partial;
        partial.budget_exhausted = true;
        partial.queries_used = env.queries();
        throw BudgetExhausted("basic_query sweep of " + std::to_string(cost) + " queries exceeds the budget",
                              std::move(partial));
    }

    std::vector<Label> set(size);
    std::vector<std::uint32_t> counts(size);
    const StreamKey draws = key.child(1);
    for (std::size_t u = 0; u < sample.subsets(); ++u) {
        const auto members = sample.members(u);
        for (std::size_t i = 0; i < size; ++i) set[i] = labels[members[i]];
        std::fill(counts.begin(), counts.end(), 0U);
        env.sample_counts(set, static_cast<std::uint32_t>(Q), draws.child(u), 0, counts);
        auto row = sample.wins(u);
        for (std::size_t i = 0; i < size; ++i) row[i] = counts[i];
    }
    sample.set_q(Q);
    return sample;
}

bool indicator(std::span<const double> wins, std::size_t position, const IndicatorParams& params, std::uint64_t q) {
    if (position >= wins.size()) throw DomainError("indicator position out of range");
    if (q == 0) throw DomainError("q must be at least 1");
    const double own = wins[position];
    // theta~_i >= alpha / q with theta~ = wins / q.
    if (own < params.alpha) return false;
    const std::size_t below = kernels::count_scaled_at_most(wins, params.beta, own);
    return static_cast<double>(below) >= params.gamma * static_cast<double>(wins.size());
}

std::vector<std::uint32_t> indicator_passes(const HyperedgeSample& sample, const IndicatorParams& params) {
    std::vector<std::uint32_t> passes(sample.items(), 0);
    for (std::size_t u = 0; u < sample.subsets(); ++u) {
        const auto members = sample.members(u);
        const auto wins = sample.wins(u);
        for (std::size_t pos = 0; pos < members.size(); ++pos) {
            if (indicator(wins, pos, params, sample.q())) ++passes[members[pos]];
        }
    }
    return passes;
}

std::vector<std::uint32_t> omega_set(std::span<const std::uint32_t> passes, std::span<const std::uint32_t> degree,
                                     double tau) {
    std::vector<std::uint32_t> members;
    for (std::uint32_t i = 0; i < passes.size(); ++i) {
        if (degree[i] > 0 && static_cast<double>(passes[i]) >= tau * static_cast<double>(degree[i])) {
            members.push_back(i);
        }
    }
    return members;
}

std::vector<std::uint32_t> omega_set(const HyperedgeSample& sample, const IndicatorParams& params) {
    params.validate();
    const auto passes = indicator_passes(sample, params);
    std::vector<std::uint32_t> degree(sample.items());
    for (std::uint32_t i = 0; i < degree.size(); ++i) degree[i] = sample.degree(i);
    return omega_set(passes, degree, params.tau);
}

MultiwiseResult alg_multiwise(Environment& env, std::span<const Label> labels, std::size_t k,
                              const MultiwiseConfig& config, std::vector<TraceRow>* trace) {
    config.validate();
    if (k > labels.size()) throw DomainError("k exceeds the number of candidate labels");

    MultiwiseResult result;
    result.remaining.assign(labels.begin(), labels.end());
    result.k_remaining = k;
    const std::size_t l = env.max_set_size();

    for (std::size_t depth = 0;; ++depth) {
        std::vector<Label>& current = result.remaining;
        const std::size_t m = current.size();
        if (result.k_remaining == 0 || m <= 2 || 2 * result.k_remaining > m) return result;
        if (depth >= config.recursion_depth_cap) {
            throw InvariantBreach("multiwise recursion depth cap " + std::to_string(config.recursion_depth_cap) +
                                  " exceeded");
        }

        const std::uint64_t start = env.queries();
        const HyperedgeSample sample =
            basic_query(env, current, l, config.kappa, config.Q, config.max_total_queries);
        std::vector<std::uint32_t> degree(m);
        for (std::uint32_t i = 0; i < m; ++i) degree[i] = sample.degree(i);
        const auto strict_passes = indicator_passes(sample, {config.alpha, 32.0, 1.0 / 4.0, kTauGuard});
        const auto loose_passes = indicator_passes(sample, {config.alpha, 4.0, 1.0 / 16.0, kTauGuard});
        const auto guard_strict = omega_set(strict_passes, degree, kTauGuard);
        const auto guard_loose = omega_set(loose_passes, degree, kTauGuard);

        TraceRow row;
        row.phase = Phase::Multiwise;
        row.depth = depth;
        row.m = m;
        row.k = result.k_remaining;
        row.rounds = config.Q;
        row.queries = env.queries() - start;

        if (!guard_strict.empty() && guard_loose.size() < result.k_remaining) {
            const auto chosen = omega_set(loose_passes, degree, kTauSelect);
            if (chosen.size() > result.k_remaining) {
                throw InvariantBreach("multiwise selected " + std::to_string(chosen.size()) + " items with k=" +
                                      std::to_string(result.k_remaining));
            }
            std::vector<bool> take(m, false);
            for (std::uint32_t i : chosen) take[i] = true;
            std::vector<Label> rest;
            for (std::size_t i = 0; i < m; ++i) (take[i] ? row.selected : rest).push_back(current[i]);
            result.selected.insert(result.selected.end(), row.selected.begin(), row.selected.end());
            result.k_remaining -= chosen.size();
            current = std::move(rest);
        } else if (guard_loose.size() >= result.k_remaining) {
            const auto keep = omega_set(loose_passes, degree, kTauKeep);
            std::vector<bool> kept(m, false);
            for (std::uint32_t i : keep) kept[i] = true;
            std::vector<Label> rest;
            for (std::size_t i = 0; i < m; ++i) (kept[i] ? rest : row.eliminated).push_back(current[i]);
            current = std::move(rest);
        } else {
            if (trace != nullptr) trace->push_back(std::move(row));
            return result;
        }
        if (trace != nullptr) trace->push_back(std::move(row));
    }
}

const char* to_string(Algorithm algorithm) noexcept {
    switch (algorithm) {
        case Algorithm::Pairwise: return "pairwise";
        case Algorithm::Multiwise: return "multiwise";
        case Algorithm::Auto: return "auto";
    }
    return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
    if (name == "pairwise") return Algorithm::Pairwise;
    if (name == "multiwise") return Algorithm::Multiwise;
    if (name == "auto") return Algorithm::Auto;
    throw DomainError("unknown algorithm '" + std::string(name) + "'");
}

TopKConfig TopKConfig::for_items(std::size_t n) {
    TopKConfig config;
    config.pairwise = PairwiseConfig::for_items(n);
    config.multiwise = MultiwiseConfig::for_items(n);
    return config;
}

Algorithm resolve_algorithm(std::size_t n, std::size_t l, const TopKConfig& config) {
    if (config.algorithm != Algorithm::Auto) return config.algorithm;
    const double log2n = std::ceil(std::log2(static_cast<double>(n)));
    return static_cast<double>(l) >= config.multiwise.l_threshold_factor * log2n ? Algorithm::Multiwise
                                                                                 : Algorithm::Pairwise;
}

namespace {

[[noreturn]] void rethrow_with(const BudgetExhausted& error, RunReport report, const Environment& env) {
    report.budget_exhausted = true;
    report.queries_used = env.queries();
    if (report.returned_labels.empty()) report.returned_labels = error.partial().returned_labels;
    throw BudgetExhausted(error.what(), std::move(report));
}

}  // namespace

RunReport top_k(Environment& env, std::size_t k, const TopKConfig& config) {
    const std::size_t n = env.n();
    const std::size_t l = env.max_set_size();
    const std::vector<Label> labels = env.all_labels();
    const Algorithm algorithm = resolve_algorithm(n, l, config);

    RunReport report;
    report.algorithm = to_string(algorithm);
    const std::uint64_t global = config.max_total_queries;
    if (global == 0) {
        report.budget_exhausted = true;
        throw BudgetExhausted("query budget is zero", std::move(report));
    }

    PairwiseConfig pairwise = config.pairwise;
    if (algorithm == Algorithm::Pairwise) {
        pairwise.max_total_queries = global;
        try {
            report.returned_labels = alg_pairwise(env, labels, k, pairwise, &report.trace);
        } catch (const BudgetExhausted& error) {
            rethrow_with(error, std::move(report), env);
        }
        report.queries_used = env.queries();
        return report;
    }

    MultiwiseConfig multiwise = config.multiwise;
    multiwise.max_total_queries = global;
    for (std::uint64_t Q = 1;; Q *= 2) {
        multiwise.Q = std::min(Q, config.multiwise.Q_cap);
        MultiwiseResult phase;
        try {
            phase = alg_multiwise(env, labels, k, multiwise, &report.trace);
        } catch (const BudgetExhausted& error) {
            rethrow_with(error, std::move(report), env);
        }

        const bool last_attempt = multiwise.Q >= config.multiwise.Q_cap;
        const std::uint64_t cap = (multiwise.Q * n + l - 1) / l;
        const std::uint64_t limit = last_attempt ? global : std::min(global, env.queries() + cap);
        pairwise.max_total_queries = limit;
        try {
            auto rest = alg_pairwise(env, phase.remaining, phase.k_remaining, pairwise, &report.trace);
            report.returned_labels = std::move(phase.selected);
            report.returned_labels.insert(report.returned_labels.end(), rest.begin(), rest.end());
            report.final_Q = multiwise.Q;
            report.queries_used = env.queries();
            return report;
        } catch (const BudgetExhausted& error) {
            if (limit == global) {
                report.final_Q = multiwise.Q;
                report.returned_labels = phase.selected;
                rethrow_with(error, std::move(report), env);
            }
        }
    }
}

}  // namespace rankbench

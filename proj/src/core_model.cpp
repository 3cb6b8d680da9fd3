#include "rankbench/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rankbench {

namespace {

constexpr std::uint64_t kPermutationStream = 0x7065726D;  // "perm"
constexpr std::uint64_t kOracleStream = 0x6F72636C;       // "orcl"

}  // namespace

Instance::Instance(std::vector<double> theta, std::size_t k, std::size_t l)
    : theta_(std::move(theta)), k_(k), l_(l) {
    const std::size_t n = theta_.size();
    if (n < 2) throw InvalidInstance("instance needs at least two items");
    if (k < 1 || k >= n) {
        throw InvalidInstance("k must satisfy 1 <= k < n (k=" + std::to_string(k) +
                              ", n=" + std::to_string(n) + ")");
    }
    if (l < 2 || l > n) {
        throw InvalidInstance("l must satisfy 2 <= l <= n (l=" + std::to_string(l) +
                              ", n=" + std::to_string(n) + ")");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(theta_[i]) || !(theta_[i] > 0.0)) {
            throw InvalidInstance("theta[" + std::to_string(i) + "] must be positive and finite");
        }
        if (i > 0 && theta_[i] > theta_[i - 1]) {
            throw InvalidInstance("theta must be sorted descending (theta[" + std::to_string(i) +
                                  "] > theta[" + std::to_string(i - 1) + "])");
        }
    }
}

Instance Instance::from_utilities(std::span<const double> mu, std::size_t k, std::size_t l) {
    std::vector<double> theta(mu.size());
    std::transform(mu.begin(), mu.end(), theta.begin(), [](double u) { return std::exp(u); });
    return Instance(std::move(theta), k, l);
}

double choice_prob(const Instance& instance, std::span<const Rank> subset, Rank winner) {
    if (subset.size() < 2) throw DomainError("choice set needs at least two items");
    double total = 0.0;
    bool found = false;
    for (Rank r : subset) {
        if (r >= instance.n()) throw DomainError("rank out of range");
        total += instance.theta(r);
        found = found || r == winner;
    }
    if (!found) throw DomainError("winner is not a member of the choice set");
    return instance.theta(winner) / total;
}

LabeledInstance::LabeledInstance(Instance instance, std::vector<Label> pi, std::uint64_t seed)
    : instance_(std::move(instance)), pi_(std::move(pi)), seed_(seed) {
    const std::size_t n = instance_.n();
    if (pi_.size() != n) throw InvalidInstance("permutation size differs from n");
    rank_.assign(n, static_cast<Rank>(n));
    for (Rank r = 0; r < n; ++r) {
        const Label label = pi_[r];
        if (label >= n || rank_[label] != n) throw InvalidInstance("pi is not a permutation");
        rank_[label] = r;
    }
}

std::vector<Label> LabeledInstance::top_labels() const {
    return {pi_.begin(), pi_.begin() + static_cast<std::ptrdiff_t>(instance_.k())};
}

bool LabeledInstance::is_correct(std::span<const Label> labels) const {
    if (labels.size() != instance_.k()) return false;
    std::vector<bool> hit(n(), false);
    for (Label label : labels) {
        if (label >= n() || hit[label] || !is_top(label)) return false;
        hit[label] = true;
    }
    return true;
}

LabeledInstance make_labeled(const Instance& instance, std::uint64_t seed) {
    std::vector<Label> pi(instance.n());
    std::iota(pi.begin(), pi.end(), Label{0});
    StreamRng rng(StreamKey::derive(seed, kPermutationStream));
    for (std::size_t i = pi.size() - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i + 1));
        std::swap(pi[i], pi[j]);
    }
    return LabeledInstance(instance, std::move(pi), seed);
}

Environment::Environment(const LabeledInstance& truth, bool record_log)
    : theta_by_label_(truth.n()),
      l_(truth.instance().l()),
      root_(StreamKey::derive(truth.seed(), kOracleStream)),
      seen_(truth.n(), 0) {
    for (Label label = 0; label < truth.n(); ++label) {
        theta_by_label_[label] = truth.instance().theta(truth.rank_of(label));
    }
    ledger_.recording_ = record_log;
}

std::vector<Label> Environment::all_labels() const {
    std::vector<Label> labels(n());
    std::iota(labels.begin(), labels.end(), Label{0});
    return labels;
}

void Environment::check_set(std::span<const Label> set) {
    if (set.size() < 2 || set.size() > l_) {
        throw DomainError("query set size " + std::to_string(set.size()) + " outside [2, " +
                          std::to_string(l_) + "]");
    }
    if (++seen_epoch_ == 0) {
        std::fill(seen_.begin(), seen_.end(), 0);
        seen_epoch_ = 1;
    }
    for (Label label : set) {
        if (label >= n()) throw DomainError("label " + std::to_string(label) + " out of range");
        if (seen_[label] == seen_epoch_) throw DomainError("query set repeats a label");
        seen_[label] = seen_epoch_;
    }
}

void Environment::record(std::span<const Label> set, Label winner) {
    ++ledger_.total_;
    if (ledger_.recording_) ledger_.log_.push_back({{set.begin(), set.end()}, winner});
}

namespace {

// First position whose cumulative weight exceeds u * total.
std::size_t inverse_cdf(std::span<const double> cumulative, double u) {
    const double target = u * cumulative.back();
    for (std::size_t i = 0; i + 1 < cumulative.size(); ++i) {
        if (target < cumulative[i]) return i;
    }
    return cumulative.size() - 1;
}

}  // namespace

Label Environment::sample_winner(std::span<const Label> set, StreamKey stream, std::uint64_t index) {
    check_set(set);
    std::vector<double> cumulative(set.size());
    double running = 0.0;
    for (std::size_t i = 0; i < set.size(); ++i) {
        running += theta_by_label_[set[i]];
        cumulative[i] = running;
    }
    const Label winner = set[inverse_cdf(cumulative, stream.uniform(index))];
    record(set, winner);
    return winner;
}

void Environment::sample_counts(std::span<const Label> set, std::uint32_t times, StreamKey stream,
                                std::uint64_t first, std::span<std::uint32_t> counts) {
    check_set(set);
    if (counts.size() != set.size()) throw DomainError("count buffer size differs from set size");
    std::vector<double> cumulative(set.size());
    double running = 0.0;
    for (std::size_t i = 0; i < set.size(); ++i) {
        running += theta_by_label_[set[i]];
        cumulative[i] = running;
    }
    for (std::uint32_t t = 0; t < times; ++t) {
        const std::size_t pos = inverse_cdf(cumulative, stream.uniform(first + t));
        ++counts[pos];
        record(set, set[pos]);
    }
}

std::uint32_t Environment::sample_pair_wins(Label a, Label b, std::uint32_t times, StreamKey stream,
                                            std::uint64_t first) {
    if (l_ < 2) throw DomainError("pair queries need l >= 2");
    if (a >= n() || b >= n()) throw DomainError("label out of range");
    if (a == b) throw DomainError("query set repeats a label");
    // Same arithmetic as inverse_cdf over {a, b}.
    const double theta_a = theta_by_label_[a];
    const double total = theta_a + theta_by_label_[b];
    std::uint32_t wins = 0;
    if (!ledger_.recording_) {
        for (std::uint32_t t = 0; t < times; ++t) {
            wins += stream.uniform(first + t) * total < theta_a ? 1U : 0U;
        }
        ledger_.total_ += times;
        return wins;
    }
    const Label pair[2] = {a, b};
    for (std::uint32_t t = 0; t < times; ++t) {
        const bool a_wins = stream.uniform(first + t) * total < theta_a;
        wins += a_wins ? 1U : 0U;
        record(pair, a_wins ? a : b);
    }
    return wins;
}

bool elimination_sound(const RunReport& report, const LabeledInstance& truth) {
    for (const TraceRow& row : report.trace) {
        for (Label label : row.selected) {
            if (!truth.is_top(label)) return false;
        }
        for (Label label : row.eliminated) {
            if (truth.is_top(label)) return false;
        }
    }
    return true;
}

}  // namespace rankbench

#include "rankbench/pairwise.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "rankbench/kernels.hpp"

namespace rankbench {

std::size_t PairwiseConfig::default_kappa(std::size_t n, double c) {
    const double log_n = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
    const auto kappa = static_cast<std::size_t>(std::ceil(c * log_n * log_n));
    return std::max<std::size_t>(kappa, 8);
}

PairwiseConfig PairwiseConfig::for_items(std::size_t n, double c) {
    PairwiseConfig config;
    config.kappa = default_kappa(n, c);
    return config;
}

void PairwiseConfig::validate() const {
    if (kappa < 2) throw DomainError("kappa must be at least 2");
    if (!(q_min_factor >= 1.0)) throw DomainError("q_min_factor must be at least 1");
    if (max_total_queries == 0) throw DomainError("max_total_queries must be positive");
    if (recursion_depth_cap == 0) throw DomainError("recursion_depth_cap must be positive");
}

LabelThresholds LabelThresholds::at(std::uint64_t q, std::size_t kappa) {
    const auto k = static_cast<double>(kappa);
    const double root = std::sqrt(k / static_cast<double>(q));
    return {1.0 + 4.0 * root, 1.0 + 32.0 * k * root};
}

EdgeLabel label_edge(std::uint64_t wins_ij, std::uint64_t wins_ji, std::uint64_t q, std::size_t kappa) {
    if (wins_ij + wins_ji == 0) throw DomainError("edge has no observed comparisons");
    if (q == 0) throw DomainError("q must be at least 1");
    const auto t = LabelThresholds::at(q, kappa);
    const double forward[1] = {static_cast<double>(wins_ij)};
    const double reverse[1] = {static_cast<double>(wins_ji)};
    std::uint8_t out[1];
    kernels::scalar::label_edges(forward, reverse, t.approx, t.strong, out);
    return static_cast<EdgeLabel>(out[0]);
}

void ComparisonGraph::add_edge(std::uint32_t a, std::uint32_t b, std::uint32_t multiplicity, EdgeLabel label) {
    if (a == b || a >= vertices_ || b >= vertices_) throw DomainError("invalid edge endpoints");
    from_.push_back(a);
    to_.push_back(b);
    multiplicity_.push_back(multiplicity);
    wins_forward_.push_back(0.0);
    wins_reverse_.push_back(0.0);
    labels_.push_back(static_cast<std::uint8_t>(label));
    queries_per_round_ += multiplicity;
}

void ComparisonGraph::add_round(std::span<const std::uint32_t> forward_wins) {
    for (std::size_t e = 0; e < from_.size(); ++e) {
        wins_forward_[e] += forward_wins[e];
        wins_reverse_[e] += multiplicity_[e] - forward_wins[e];
    }
    ++rounds_;
}

void ComparisonGraph::relabel(std::size_t kappa) {
    const auto t = LabelThresholds::at(rounds_, kappa);
    kernels::label_edges(wins_forward_, wins_reverse_, t.approx, t.strong, labels_);
}

ComparisonGraph sample_pair_graph(std::size_t m, std::size_t kappa, StreamRng& rng) {
    if (m < 2) throw DomainError("pair graph needs at least two vertices");
    const std::size_t s = m * kappa;
    std::vector<std::uint64_t> keys(s);
    for (auto& key : keys) {
        auto a = static_cast<std::uint32_t>(rng.below(m));
        auto b = static_cast<std::uint32_t>(rng.below(m - 1));
        if (b >= a) ++b;
        if (a > b) std::swap(a, b);
        key = (static_cast<std::uint64_t>(a) << 32) | b;
    }
    std::sort(keys.begin(), keys.end());
    ComparisonGraph graph(m);
    for (std::size_t i = 0; i < keys.size();) {
        std::size_t j = i;
        while (j < keys.size() && keys[j] == keys[i]) ++j;
        graph.add_edge(static_cast<std::uint32_t>(keys[i] >> 32), static_cast<std::uint32_t>(keys[i]),
                       static_cast<std::uint32_t>(j - i));
        i = j;
    }
    return graph;
}

DominanceRelation::DominanceRelation(const ComparisonGraph& graph, std::size_t kappa)
    : m_(graph.vertices()), words_((graph.vertices() + 63) / 64) {
    struct Arc {
        std::uint32_t from;
        std::uint32_t to;
    };
    std::vector<Arc> weak;
    std::vector<Arc> strict;
    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
        const std::uint32_t a = graph.from(e);
        const std::uint32_t b = graph.to(e);
        switch (graph.label(e)) {
            case EdgeLabel::ApproxEq:
                weak.push_back({a, b});
                weak.push_back({b, a});
                break;
            case EdgeLabel::GeqWeak: weak.push_back({a, b}); break;
            case EdgeLabel::GtStrong: strict.push_back({a, b}); break;
            case EdgeLabel::LeqWeak: weak.push_back({b, a}); break;
            case EdgeLabel::LtStrong: strict.push_back({b, a}); break;
        }
    }

    // plain_[v]: sources reaching v by a walk without a strict step;
    // reach_[v]: sources reaching v by a walk with at least one strict step.
    // Jacobi updates so iteration h accounts for walks of exactly <= h edges.
    const std::size_t total = m_ * words_;
    std::vector<std::uint64_t> plain(total, 0);
    reach_.assign(total, 0);
    for (std::size_t v = 0; v < m_; ++v) plain[v * words_ + v / 64] |= std::uint64_t{1} << (v % 64);

    auto row = [this](std::vector<std::uint64_t>& bits, std::size_t v) {
        return std::span<std::uint64_t>(bits.data() + v * words_, words_);
    };
    auto crow = [this](const std::vector<std::uint64_t>& bits, std::size_t v) {
        return std::span<const std::uint64_t>(bits.data() + v * words_, words_);
    };

    std::vector<std::uint64_t> next_plain;
    std::vector<std::uint64_t> next_reach;
    for (std::size_t hop = 0; hop < kappa; ++hop) {
        next_plain = plain;
        next_reach = reach_;
        bool changed = false;
        for (const Arc& arc : weak) {
            changed |= kernels::or_into(row(next_plain, arc.to), crow(plain, arc.from));
            changed |= kernels::or_into(row(next_reach, arc.to), crow(reach_, arc.from));
        }
        for (const Arc& arc : strict) {
            changed |= kernels::or_into(row(next_reach, arc.to), crow(plain, arc.from));
            changed |= kernels::or_into(row(next_reach, arc.to), crow(reach_, arc.from));
        }
        plain.swap(next_plain);
        reach_.swap(next_reach);
        if (!changed) break;
    }

    dominators_.assign(m_, 0);
    dominated_.assign(m_, 0);
    for (std::size_t j = 0; j < m_; ++j) {
        auto bits = row(reach_, j);
        bits[j / 64] &= ~(std::uint64_t{1} << (j % 64));
        for (std::size_t w = 0; w < words_; ++w) {
            std::uint64_t word = bits[w];
            dominators_[j] += static_cast<std::size_t>(std::popcount(word));
            while (word != 0) {
                const int bit = std::countr_zero(word);
                ++dominated_[w * 64 + static_cast<std::size_t>(bit)];
                word &= word - 1;
            }
        }
    }
}

bool DominanceRelation::dominates(std::uint32_t i, std::uint32_t j) const {
    if (i >= m_ || j >= m_) throw DomainError("vertex out of range");
    return (reach_[j * words_ + i / 64] >> (i % 64)) & 1U;
}

bool strictly_dominates(const ComparisonGraph& graph, std::uint32_t i, std::uint32_t j, std::size_t kappa) {
    return DominanceRelation(graph, kappa).dominates(i, j);
}

PartitionResult classify(const DominanceRelation& relation, std::size_t k) {
    const std::size_t m = relation.size();
    PartitionResult result;
    for (std::uint32_t i = 0; i < m; ++i) {
        const bool bad = relation.dominators(i) >= k;
        const bool good = k <= m && relation.dominated(i) >= m - k;
        if (bad && !good) {
            result.omega_b.push_back(i);
        } else if (good && !bad) {
            result.omega_g.push_back(i);
        } else {
            result.remaining.push_back(i);
        }
    }
    return result;
}

PartitionResult classify(const ComparisonGraph& graph, std::size_t k, std::size_t kappa) {
    return classify(DominanceRelation(graph, kappa), k);
}

namespace {

enum class Status : std::uint8_t { Open, Good, Bad };

TraceRow make_row(std::size_t depth, std::size_t m, std::size_t k, std::uint64_t rounds,
                  std::span<const Label> current, std::span<const Status> status, std::uint64_t queries) {
    TraceRow row;
    row.phase = Phase::Pairwise;
    row.depth = depth;
    row.m = m;
    row.k = k;
    row.rounds = rounds;
    row.queries = queries;
    for (std::size_t i = 0; i < current.size(); ++i) {
        if (status[i] == Status::Good) row.selected.push_back(current[i]);
        if (status[i] == Status::Bad) row.eliminated.push_back(current[i]);
    }
    return row;
}

}  // namespace

std::vector<Label> alg_pairwise(Environment& env, std::span<const Label> labels, std::size_t k,
                                const PairwiseConfig& config, std::vector<TraceRow>* trace) {
    config.validate();
    if (k > labels.size()) throw DomainError("k exceeds the number of candidate labels");

    const auto kappa = static_cast<double>(config.kappa);
    const double trust_gate = config.q_min_factor * kappa * kappa * kappa;

    std::vector<Label> current(labels.begin(), labels.end());
    std::vector<Label> accepted;
    std::vector<TraceRow> rows;
    auto emit = [&](TraceRow row) {
        if (trace != nullptr) trace->push_back(row);
        rows.push_back(std::move(row));
    };

    for (std::size_t depth = 0;; ++depth) {
        const std::size_t m = current.size();
        if (k == 0) return accepted;
        if (k == m) {
            accepted.insert(accepted.end(), current.begin(), current.end());
            return accepted;
        }
        if (depth >= config.recursion_depth_cap) {
            throw InvariantBreach("pairwise recursion depth cap " + std::to_string(config.recursion_depth_cap) +
                                  " exceeded");
        }

        const StreamKey level_key = env.fresh_stream();
        StreamRng graph_rng(level_key.child(0));
        ComparisonGraph graph = sample_pair_graph(m, config.kappa, graph_rng);
        const std::size_t edges = graph.edge_count();
        std::vector<StreamKey> edge_keys(edges);
        for (std::size_t e = 0; e < edges; ++e) edge_keys[e] = level_key.child(1).child(e);

        std::vector<Status> status(m, Status::Open);
        std::size_t decided = 0;
        std::vector<std::uint32_t> wins(edges);
        const std::uint64_t level_start = env.queries();

        for (std::uint64_t q = 1;; ++q) {
            if (env.queries() + graph.queries_per_round() > config.max_total_queries) {
                RunReport partial;
                partial.algorithm = "pairwise";
                partial.budget_exhausted = true;
                partial.queries_used = env.queries();
                partial.returned_labels = accepted;
                partial.trace = rows;
                partial.trace.push_back(
                    make_row(depth, m, k, q - 1, current, status, env.queries() - level_start));
                if (trace != nullptr) trace->push_back(partial.trace.back());
                throw BudgetExhausted("pairwise query budget exhausted after " + std::to_string(env.queries()) +
                                          " queries",
                                      std::move(partial));
            }
            for (std::size_t e = 0; e < edges; ++e) {
                const std::uint32_t c = graph.multiplicity(e);
                wins[e] = env.sample_pair_wins(current[graph.from(e)], current[graph.to(e)], c, edge_keys[e],
                                               (q - 1) * c);
            }
            graph.add_round(wins);
            if (static_cast<double>(q) < trust_gate) continue;

            graph.relabel(config.kappa);
            const PartitionResult part = classify(DominanceRelation(graph, config.kappa), k);
            for (std::uint32_t i : part.omega_g) {
                if (status[i] == Status::Open) {
                    status[i] = Status::Good;
                    ++decided;
                }
            }
            for (std::uint32_t i : part.omega_b) {
                if (status[i] == Status::Open) {
                    status[i] = Status::Bad;
                    ++decided;
                }
            }
            if (4 * decided >= m) {
                emit(make_row(depth, m, k, q, current, status, env.queries() - level_start));
                break;
            }
        }

        std::vector<Label> rest;
        std::size_t good = 0;
        for (std::size_t i = 0; i < m; ++i) {
            if (status[i] == Status::Good) {
                accepted.push_back(current[i]);
                ++good;
            } else if (status[i] == Status::Open) {
                rest.push_back(current[i]);
            }
        }
        if (good > k || k - good > rest.size()) {
            throw InvariantBreach("pairwise level " + std::to_string(depth) + " accepted " + std::to_string(good) +
                                  " of k=" + std::to_string(k) + " leaving " + std::to_string(rest.size()));
        }
        k -= good;
        current = std::move(rest);
    }
}

}  // namespace rankbench

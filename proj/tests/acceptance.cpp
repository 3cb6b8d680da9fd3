// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--only=1,5] [--known-red=2,7]
//
// Exit status is non-zero when a criterion outside --known-red fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rankbench/complexity.hpp"
#include "rankbench/experiment.hpp"
#include "rankbench/pairwise.hpp"
#include "rankbench/verify.hpp"

using namespace rankbench;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// 1. sample_winner against the exact distribution.
Verdict oracle_fidelity() {
    const auto start = std::chrono::steady_clock::now();
    StreamRng rng(StreamKey::derive(1, 1));
    int rejected = 0;
    double min_p = 1.0;
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 2 + rng.below(15);
        std::vector<double> theta(n);
        for (double& x : theta) x = std::exp(6.0 * rng.uniform() - 3.0);
        std::sort(theta.rbegin(), theta.rend());
        const std::size_t size = 2 + rng.below(n - 1);
        const Instance inst(theta, 1, size);
        const LabeledInstance truth = make_labeled(inst, 1000 + t);
        Environment env(truth);
        std::vector<Rank> ranks(n);
        for (Rank r = 0; r < n; ++r) ranks[r] = r;
        std::shuffle(ranks.begin(), ranks.end(), rng);
        ranks.resize(size);
        std::vector<Label> set;
        for (Rank r : ranks) set.push_back(truth.label_of(r));
        std::vector<std::uint64_t> observed(size, 0);
        const StreamKey key = env.fresh_stream();
        for (std::uint64_t d = 0; d < 100000; ++d) {
            const Label w = env.sample_winner(set, key, d);
            ++observed[static_cast<std::size_t>(std::find(set.begin(), set.end(), w) - set.begin())];
        }
        const auto res = verify::chi_square_gof(observed, verify::exact_choice_distribution(inst, ranks));
        min_p = std::min(min_p, res.p_value);
        rejected += res.p_value < verify::significance::kChiSquareAlpha ? 1 : 0;
    }
    const double secs = seconds_since(start);
    return {rejected == 0 && secs < 30.0,
            fmt("%d/20 subsets rejected at alpha=0.001, min p=%.4f, %.1f s (< 30 s)", rejected, min_p, secs)};
}

// Criteria 2 and 6 share the runs.
struct EndToEnd {
    std::vector<std::string> names;
    std::vector<verify::TrialSummary> summaries;
    std::vector<std::vector<RunOutcome>> outcomes;
    double seconds = 0.0;
};

const EndToEnd& end_to_end() {
    static const EndToEnd data = [] {
        EndToEnd out;
        const auto start = std::chrono::steady_clock::now();
        struct Case {
            Family family;
            std::size_t n;
            std::size_t k;
        };
        const Case cases[] = {{Family::Geometric, 16, 1}, {Family::Geometric, 16, 4}, {Family::Geometric, 32, 1},
                              {Family::Geometric, 32, 8}, {Family::TwoBlock, 16, 4},  {Family::TwoBlock, 32, 8}};
        for (const Case& c : cases) {
            FamilyParams p;
            p.n = c.n;
            p.k = c.k;
            p.l = 2;
            p.rho = 0.6;
            const Instance inst = generate(c.family, p);
            const TopKConfig config = make_config(c.n, Algorithm::Auto, {.kappa = 16, .budget = 10'000'000});
            std::vector<RunOutcome> runs;
            out.summaries.push_back(verify::estimate_success(inst, config, seed_range(1, 100), &runs));
            out.outcomes.push_back(std::move(runs));
            out.names.push_back(family_id(c.family, p) + fmt(" n=%zu k=%zu", c.n, c.k));
        }
        out.seconds = seconds_since(start);
        return out;
    }();
    return data;
}

Verdict end_to_end_success() {
    const EndToEnd& e = end_to_end();
    bool pass = e.seconds < 600.0;
    std::string detail;
    for (std::size_t i = 0; i < e.names.size(); ++i) {
        const auto& s = e.summaries[i];
        std::size_t exhausted = 0;
        for (const RunOutcome& o : e.outcomes[i]) exhausted += o.status == RunStatus::BudgetExhausted ? 1 : 0;
        pass = pass && s.estimate >= 0.95;
        detail += fmt("\n      %-34s success %3llu/100 [%.2f, %.2f]  budget-exhausted %zu", e.names[i].c_str(),
                      static_cast<unsigned long long>(s.successes), s.lower, s.upper, exhausted);
    }
    return {pass, fmt("rate >= 0.95 on each of 6 instances, kappa=16, budget 1e7, %.0f s (< 600 s)", e.seconds) +
                      detail};
}

// 3. Label soundness at q = kappa^3.
Verdict label_soundness() {
    const std::size_t kappa = 8;
    const std::uint64_t q = kappa * kappa * kappa;
    const double root = std::sqrt(double(kappa) / double(q));
    StreamRng rng(StreamKey::derive(3, 3));
    auto wins_for = [&](double ratio, std::uint64_t trial, std::uint64_t tag) {
        const StreamKey key = StreamKey::derive(tag, trial);
        const double p = ratio / (1.0 + ratio);
        std::uint64_t w = 0;
        for (std::uint64_t d = 0; d < q; ++d) w += key.uniform(d) < p ? 1 : 0;
        return w;
    };

    int a_bad = 0;
    for (std::uint64_t t = 0; t < 1000; ++t) {
        // theta_i >= theta_j: equal scores are the hardest case.
        const std::uint64_t w = wins_for(1.0, t, 31);
        const EdgeLabel l = label_edge(w, q - w, q, kappa);
        a_bad += (l == EdgeLabel::LtStrong || l == EdgeLabel::LeqWeak) ? 1 : 0;
    }
    const double strong_ratio = 1.0 + 128.0 * kappa * root;
    int b_good = 0;
    for (std::uint64_t t = 0; t < 1000; ++t) {
        const std::uint64_t w = wins_for(strong_ratio, t, 32);
        b_good += label_edge(w, q - w, q, kappa) == EdgeLabel::GtStrong ? 1 : 0;
    }
    const double implied = 1.0 + 16.0 * kappa * root;
    int c_emitted = 0;
    int c_good = 0;
    for (std::uint64_t t = 0; c_emitted < 1000; ++t) {
        // Log-uniform true ratio in [1/256, 256].
        const double ratio = std::exp((2.0 * rng.uniform() - 1.0) * std::log(256.0));
        const std::uint64_t w = wins_for(ratio, t, 33);
        if (w == 0 && q - w == 0) continue;
        if (label_edge(w, q - w, q, kappa) != EdgeLabel::GtStrong) continue;
        ++c_emitted;
        c_good += ratio >= implied ? 1 : 0;
    }
    const bool pass = a_bad <= 10 && b_good >= 990 && c_good >= 990;
    return {pass, fmt("kappa=8, q=512: (a) reversed labels %d/1000 (<= 10); (b) strong at ratio %.0f %d/1000 "
                      "(>= 990); (c) strong labels with true ratio >= %.0f %d/%d (>= 990)",
                      a_bad, strong_ratio, b_good, implied, c_good, c_emitted)};
}

// 4. Rank-monotone paths in G(m, kappa/m).
Verdict graph_paths() {
    const std::size_t m = 200;
    const std::size_t kappa = 64;
    const double p = double(kappa) / double(m);
    int found = 0;
    int total = 0;
    for (std::uint64_t g = 0; g < 100; ++g) {
        StreamRng rng(StreamKey::derive(4, g));
        std::vector<std::vector<std::uint32_t>> adj(m);
        for (std::uint32_t a = 0; a < m; ++a) {
            for (std::uint32_t b = a + 1; b < m; ++b) {
                if (rng.uniform() < p) {
                    adj[a].push_back(b);
                    adj[b].push_back(a);
                }
            }
        }
        for (int pair = 0; pair < 20; ++pair) {
            const auto i = static_cast<std::uint32_t>(rng.below(m - m / 4));
            const auto j = static_cast<std::uint32_t>(i + m / 4 + rng.below(m - i - m / 4));
            // BFS over rank-increasing steps only, at most kappa hops.
            std::vector<int> dist(m, -1);
            std::vector<std::uint32_t> frontier{i};
            dist[i] = 0;
            for (std::size_t hop = 0; hop < kappa && !frontier.empty() && dist[j] < 0; ++hop) {
                std::vector<std::uint32_t> next;
                for (std::uint32_t u : frontier) {
                    for (std::uint32_t v : adj[u]) {
                        if (v > u && v <= j && dist[v] < 0) {
                            dist[v] = static_cast<int>(hop + 1);
                            next.push_back(v);
                        }
                    }
                }
                frontier = std::move(next);
            }
            found += dist[j] >= 0 ? 1 : 0;
            ++total;
        }
    }
    return {found * 100 >= total * 99, fmt("m=200, kappa=64: monotone path found for %d/%d pairs (>= 99%%)", found,
                                           total)};
}

// 5. Indicator separation on random subsets.
Verdict indicator_separation() {
    // 16 items at 1, 240 at 0.05; subsets of 32 queried 4096 times.
    const std::size_t m = 256;
    const std::size_t l = 32;
    const std::uint64_t q = 4096;
    std::vector<double> theta(m, 0.05);
    std::fill(theta.begin(), theta.begin() + 16, 1.0);
    const Instance inst(theta, 16, l);
    const IndicatorParams params{8, 4, 1.0 / 16, kTauKeep};
    auto rate = [&](Rank focus, std::uint64_t tag) {
        int hits = 0;
        for (std::uint64_t t = 0; t < 1000; ++t) {
            const LabeledInstance truth = make_labeled(inst, tag * 100000 + t);
            Environment env(truth);
            StreamRng rng(env.fresh_stream());
            std::vector<Rank> others;
            for (Rank r = 0; r < m; ++r) {
                if (r != focus) others.push_back(r);
            }
            for (std::size_t i = 0; i + 1 < l; ++i) {
                std::swap(others[i], others[i + rng.below(others.size() - i)]);
            }
            std::vector<Label> set{truth.label_of(focus)};
            for (std::size_t i = 0; i + 1 < l; ++i) set.push_back(truth.label_of(others[i]));
            std::vector<std::uint32_t> counts(l, 0);
            env.sample_counts(set, static_cast<std::uint32_t>(q), env.fresh_stream(), 0, counts);
            const std::vector<double> wins(counts.begin(), counts.end());
            hits += indicator(wins, 0, params, q) ? 1 : 0;
        }
        return hits / 1000.0;
    };
    // Case 1: theta_i = 1 >= 2 beta theta_{(1-2gamma)m} = 0.4.
    const double case1 = rate(0, 1);
    // Case 2: theta_i = 0.05 <= (beta/2) theta_{(1-gamma)m} = 0.1.
    const double case2 = rate(200, 2);
    const bool pass = case1 >= 15.0 / 16 - 0.05 && case2 <= 9.0 / 16 + 0.05;
    return {pass, fmt("beta=4, gamma=1/16, alpha=8, q=4096: case 1 Pr[X=1]=%.3f (>= %.4f), case 2 Pr[X=1]=%.3f "
                      "(<= %.4f)",
                      case1, 15.0 / 16 - 0.05, case2, 9.0 / 16 + 0.05)};
}

Verdict elimination_soundness() {
    const EndToEnd& e = end_to_end();
    std::size_t runs = 0;
    std::size_t sound = 0;
    for (const auto& outcomes : e.outcomes) {
        for (const RunOutcome& o : outcomes) {
            ++runs;
            sound += o.sound ? 1 : 0;
        }
    }
    return {sound * 100 >= runs * 99,
            fmt("runs with every accepted item in the top-k and every eliminated item outside it: %zu/%zu "
                "(>= 99%%), partial traces of budget-exhausted runs included",
                sound, runs)};
}

// 7. Closed-form bound examples and properties.
Verdict bound_formulas() {
    const auto a = upper_bound(Instance({2, 2, 1, 1}, 2, 2));
    const auto a_low = lower_bound(Instance({2, 2, 1, 1}, 2, 2));
    const auto b = upper_bound(Instance({4, 1}, 1, 2));
    const auto b_low = lower_bound(Instance({4, 1}, 1, 2));
    StreamRng rng(StreamKey::derive(7, 7));
    int agree = 0;
    int big_l = 0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 2 + rng.below(63);
        std::vector<double> theta(n);
        for (double& x : theta) x = std::exp(10.0 * rng.uniform() - 5.0);
        std::sort(theta.rbegin(), theta.rend());
        const Instance inst(theta, 1 + rng.below(n - 1), 2 + rng.below(n - 1));
        agree += upper_bound(inst).total == lower_bound(inst).total ? 1 : 0;
        big_l += check_big_l(inst) ? 1 : 0;
    }
    const bool first = a.total == 15 && a_low.total == 15;
    const bool second = b.total == 3.25 && b_low.total == 3.25;
    const bool pass = first && second && agree == 1000 && big_l == 1000;
    std::string detail =
        fmt("(2,2,1,1) k=2 l=2 total %g/%g (want 15); (4,1) k=1 l=2 total %g/%g (want 3.25), terms "
            "(%g, %g, %g, %g, %g); upper==lower %d/1000; big-l inequality %d/1000",
            a.total, a_low.total, b.total, b_low.total, b.term_n_over_l, b.term_k, b.term_tail_mass,
            b.term_bottom_gap, b.term_top_gap, agree, big_l);
    if (!second && b.total == 2.25) {
        detail += "\n      the listed terms sum to 2.25; 3.25 is not reachable from the five-term expression";
    }
    return {pass, detail};
}

// 8. Bound totals against measured query counts.
Verdict complexity_trend() {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = 32;
    auto total_at = [&](double rho) {
        return upper_bound(generate(Family::Geometric, {.n = n, .k = 1, .l = n, .rho = rho})).total;
    };
    const double base = total_at(0.5);
    std::vector<double> bounds;
    std::vector<double> medians;
    const TopKConfig config = make_config(n, Algorithm::Pairwise, {.kappa = 2, .budget = 100'000'000});
    std::size_t exhausted = 0;
    for (int i = 0; i < 20; ++i) {
        const double target = base * std::pow(100.0, i / 19.0);
        double lo = 0.5;
        double hi = 1.0 - 1e-9;
        for (int it = 0; it < 200 && i > 0; ++it) {
            const double mid = 0.5 * (lo + hi);
            (total_at(mid) < target ? lo : hi) = mid;
        }
        const double rho = i == 0 ? 0.5 : 0.5 * (lo + hi);
        const Instance inst = generate(Family::Geometric, {.n = n, .k = 1, .l = n, .rho = rho});
        std::vector<RunOutcome> runs;
        verify::estimate_success(inst, config, seed_range(1, 9), &runs);
        std::vector<double> q;
        for (const RunOutcome& o : runs) {
            q.push_back(static_cast<double>(o.report.queries_used));
            exhausted += o.status == RunStatus::BudgetExhausted ? 1 : 0;
        }
        bounds.push_back(upper_bound(inst).total);
        medians.push_back(median(q));
    }
    const double rho_s = verify::spearman(bounds, medians);
    std::string detail = fmt("n=32, k=1, 20 geometric instances, bound totals %.1f..%.1f, 9 seeds each: "
                             "Spearman %.3f (>= 0.9), budget-exhausted runs %zu, %.0f s",
                             bounds.front(), bounds.back(), rho_s, exhausted, seconds_since(start));
    return {rho_s >= 0.9, detail};
}

// 9. Multi-wise against pairwise on an easy instance.
Verdict multiwise_advantage() {
    const auto start = std::chrono::steady_clock::now();
    const Instance inst =
        generate(Family::TwoBlock, {.n = 256, .k = 8, .l = 32, .theta_hi = 100, .theta_lo = 1});
    auto med = [&](Algorithm algorithm, std::size_t& ok) {
        const TopKConfig config = make_config(256, algorithm, {.kappa = 8, .budget = 10'000'000});
        std::vector<RunOutcome> runs;
        ok = verify::estimate_success(inst, config, seed_range(1, 50), &runs).successes;
        std::vector<double> q;
        for (const RunOutcome& o : runs) q.push_back(static_cast<double>(o.report.queries_used));
        return median(q);
    };
    std::size_t ok_multi = 0;
    std::size_t ok_pair = 0;
    const double multi = med(Algorithm::Multiwise, ok_multi);
    const double pair = med(Algorithm::Pairwise, ok_pair);
    return {multi <= 0.5 * pair,
            fmt("n=256, k=8, 100:1, l=32, kappa=8, 50 seeds: median queries multiwise %.0f (%zu/50 correct) vs "
                "pairwise %.0f (%zu/50 correct), ratio %.4f (<= 0.5), %.0f s",
                multi, ok_multi, pair, ok_pair, multi / pair, seconds_since(start))};
}

// 10. Relaxation against walk enumeration.
Verdict dominance_equivalence() {
    StreamRng rng(StreamKey::derive(10, 10));
    std::size_t mismatches = 0;
    std::size_t pairs = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t m = 2 + rng.below(6);
        const std::size_t kappa = 1 + rng.below(7);
        ComparisonGraph g(m);
        std::vector<verify::LabeledEdge> edges;
        const std::size_t count = rng.below(13);
        for (std::size_t e = 0; e < count; ++e) {
            auto a = static_cast<std::uint32_t>(rng.below(m));
            auto b = static_cast<std::uint32_t>(rng.below(m - 1));
            if (b >= a) ++b;
            const auto label = static_cast<EdgeLabel>(rng.below(5));
            g.add_edge(a, b, 1, label);
            edges.push_back({a, b, label});
        }
        const auto oracle = verify::brute_force_dominance(m, edges, kappa);
        for (std::uint32_t i = 0; i < m; ++i) {
            for (std::uint32_t j = 0; j < m; ++j) {
                ++pairs;
                mismatches += strictly_dominates(g, i, j, kappa) != oracle[i][j] ? 1 : 0;
            }
        }
    }
    return {mismatches == 0, fmt("500 graphs (<= 7 vertices, <= 12 edges), %zu ordered pairs, %zu mismatches",
                                 pairs, mismatches)};
}

// 11. Identical CSV for identical specs.
Verdict determinism() {
    auto strip = [](const std::string& csv) {
        std::istringstream in(csv);
        std::string out;
        for (std::string line; std::getline(in, line);) {
            // Drop the elapsed_ms column (9th field; ids here carry no quoted commas).
            std::size_t pos = 0;
            for (int f = 0; f < 8; ++f) pos = line.find(',', pos) + 1;
            const std::size_t end = line.find(',', pos);
            out += line.substr(0, pos) + line.substr(end) + "\n";
        }
        return out;
    };
    int identical = 0;
    int specs = 0;
    for (Algorithm algorithm : {Algorithm::Auto, Algorithm::Multiwise}) {
        const Instance inst = generate(Family::Geometric, {.n = 24, .k = 3, .l = 8, .rho = 0.3});
        std::string first;
        for (std::size_t threads : {1, 4}) {
            ExperimentSpec spec{"det", inst, algorithm, seed_range(100, 8), {.kappa = 8, .budget = 2'000'000},
                                threads};
            std::ostringstream out;
            write_csv(out, spec, run_experiment(spec));
            if (first.empty()) {
                first = strip(out.str());
            } else {
                ++specs;
                identical += strip(out.str()) == first ? 1 : 0;
            }
        }
    }
    return {identical == specs, fmt("%d/%d repeated runs byte-identical outside elapsed_ms", identical, specs)};
}

std::set<int> parse_list(const std::string& text) {
    std::set<int> out;
    std::istringstream in(text);
    for (std::string item; std::getline(in, item, ',');) {
        if (!item.empty()) out.insert(std::stoi(item));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    std::set<int> known_red;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg.rfind("--only=", 0) == 0) {
            only = parse_list(arg.substr(7));
        } else if (arg.rfind("--known-red=", 0) == 0) {
            known_red = parse_list(arg.substr(12));
        } else {
            std::cerr << "usage: acceptance [--only=1,2] [--known-red=2,7]\n";
            return 2;
        }
    }

    struct Criterion {
        int id;
        const char* name;
        std::function<Verdict()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "oracle fidelity", oracle_fidelity},
        {2, "end-to-end correctness", end_to_end_success},
        {3, "edge-label soundness", label_soundness},
        {4, "graph-path existence", graph_paths},
        {5, "indicator separation", indicator_separation},
        {6, "elimination soundness", elimination_soundness},
        {7, "bound formulas", bound_formulas},
        {8, "complexity trend", complexity_trend},
        {9, "multi-wise advantage", multiwise_advantage},
        {10, "dominance oracle equivalence", dominance_equivalence},
        {11, "determinism", determinism},
    };

    int unexpected = 0;
    for (const Criterion& c : criteria) {
        if (!only.empty() && !only.contains(c.id)) continue;
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        const bool known = known_red.contains(c.id);
        const char* tag = v.pass ? "PASS" : (known ? "FAIL (known)" : "FAIL");
        std::cout << fmt("[%-12s] %2d %-28s ", tag, c.id, c.name) << v.detail << std::endl;
        if (!v.pass && !known) ++unexpected;
    }
    if (!known_red.empty()) {
        std::cout << "known-red criteria are analyzed in README.md (Acceptance status)\n";
    }
    return unexpected == 0 ? 0 : 1;
}

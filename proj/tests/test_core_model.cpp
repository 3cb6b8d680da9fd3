#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "rankbench/core_model.hpp"
#include "rankbench/multiwise.hpp"
#include "rankbench/pairwise.hpp"

using namespace rankbench;

namespace {

std::vector<Rank> ranks_of(const LabeledInstance& truth, std::span<const Label> labels) {
    std::vector<Rank> out;
    for (Label label : labels) out.push_back(truth.rank_of(label));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> frequencies(const Instance& instance, std::span<const Rank> ranks, std::uint32_t draws,
                                std::uint64_t seed) {
    const LabeledInstance truth = make_labeled(instance, seed);
    Environment env(truth);
    std::vector<Label> set;
    for (Rank r : ranks) set.push_back(truth.label_of(r));
    const StreamKey key = env.fresh_stream();
    std::vector<double> freq(set.size(), 0.0);
    for (std::uint32_t t = 0; t < draws; ++t) {
        const Label w = env.sample_winner(set, key, t);
        const auto pos = static_cast<std::size_t>(std::find(set.begin(), set.end(), w) - set.begin());
        freq[pos] += 1.0 / draws;
    }
    CHECK(env.queries() == draws);
    return freq;
}

std::vector<Label> perm(const Instance& instance, std::uint64_t seed) {
    const LabeledInstance truth = make_labeled(instance, seed);
    return {truth.pi().begin(), truth.pi().end()};
}

}  // namespace

TEST_CASE("instance validation") {
    CHECK_NOTHROW(Instance({2, 1}, 1, 2));
    CHECK_THROWS_AS(Instance({1}, 1, 2), InvalidInstance);
    CHECK_THROWS_AS(Instance({2, 1}, 2, 2), InvalidInstance);
    CHECK_THROWS_AS(Instance({2, 1}, 0, 2), InvalidInstance);
    CHECK_THROWS_AS(Instance({2, 1}, 1, 3), InvalidInstance);
    CHECK_THROWS_AS(Instance({2, 1}, 1, 1), InvalidInstance);
    CHECK_THROWS_AS(Instance({1, 2}, 1, 2), InvalidInstance);
    CHECK_THROWS_AS(Instance({1, 0}, 1, 2), InvalidInstance);
    CHECK_THROWS_AS(Instance({INFINITY, 1}, 1, 2), InvalidInstance);
    CHECK(Instance({1, 1}, 1, 2).has_tie());
    CHECK_FALSE(Instance({2, 1}, 1, 2).has_tie());

    const double mu[] = {0.0, std::log(0.5)};
    const Instance from_mu = Instance::from_utilities(mu, 1, 2);
    CHECK(from_mu.theta(0) == doctest::Approx(1.0));
    CHECK(from_mu.theta(1) == doctest::Approx(0.5));
}

TEST_CASE("choice probabilities") {
    const Rank all3[] = {0, 1, 2};
    CHECK(choice_prob(Instance({1, 1, 1}, 1, 3), all3, 1) == doctest::Approx(1.0 / 3));
    const Rank pair[] = {0, 1};
    CHECK(choice_prob(Instance({2, 1}, 1, 2), pair, 0) == doctest::Approx(2.0 / 3));
    const Rank ends[] = {0, 2};
    CHECK(choice_prob(Instance({3, 2, 1}, 1, 3), ends, 2) == doctest::Approx(0.25));

    const Instance inst({3, 2, 1}, 1, 3);
    CHECK_THROWS_AS(choice_prob(inst, ends, 1), DomainError);
    const Rank single[] = {0};
    CHECK_THROWS_AS(choice_prob(inst, single, 0), DomainError);
}

TEST_CASE("choice probabilities sum to one") {
    StreamRng rng(StreamKey::derive(7, 7));
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.below(20);
        std::vector<double> theta(n);
        for (double& t : theta) t = std::exp(8.0 * rng.uniform() - 4.0);
        std::sort(theta.rbegin(), theta.rend());
        const Instance inst(theta, 1, n);
        std::vector<Rank> subset;
        for (Rank r = 0; r < n; ++r) {
            if (rng.uniform() < 0.5) subset.push_back(r);
        }
        if (subset.size() < 2) continue;
        double total = 0.0;
        for (Rank r : subset) total += choice_prob(inst, subset, r);
        CHECK(std::abs(total - 1.0) <= 1e-12);
    }
}

TEST_CASE("sample_winner frequencies") {
    SUBCASE("equal scores") {
        const Instance inst({1, 1, 1, 1, 1}, 1, 5);
        const Rank set[] = {0, 2, 3, 4};
        for (double f : frequencies(inst, set, 60000, 3)) CHECK(std::abs(f - 0.25) <= 0.01);
    }
    SUBCASE("3:2:1") {
        const Instance inst({3, 2, 1}, 1, 3);
        const Rank set[] = {0, 1, 2};
        const auto f = frequencies(inst, set, 100000, 4);
        CHECK(std::abs(f[0] - 0.5) <= 0.01);
        CHECK(std::abs(f[1] - 1.0 / 3) <= 0.01);
        CHECK(std::abs(f[2] - 1.0 / 6) <= 0.01);
    }
    SUBCASE("overwhelming favourite") {
        const Instance inst({1e6, 1}, 1, 2);
        const Rank set[] = {0, 1};
        CHECK(frequencies(inst, set, 1000, 5)[0] * 1000 >= 990);
    }
}

TEST_CASE("sample_winner deviation shrinks like sqrt(ln N / N)") {
    const Instance inst({5, 3, 2, 1}, 1, 4);
    const Rank set[] = {0, 1, 2, 3};
    const double exact[] = {5.0 / 11, 3.0 / 11, 2.0 / 11, 1.0 / 11};
    int inside = 0;
    const std::uint32_t N = 2000;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto f = frequencies(inst, set, N, 100 + seed);
        double worst = 0.0;
        for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(f[i] - exact[i]));
        inside += worst <= 4.0 * std::sqrt(std::log(double(N)) / N) ? 1 : 0;
    }
    CHECK(inside >= 198);
}

TEST_CASE("sample_winner rejects bad sets") {
    const Instance inst({3, 2, 1}, 1, 2);
    const LabeledInstance truth = make_labeled(inst, 1);
    Environment env(truth);
    const StreamKey key = env.fresh_stream();
    const Label big[] = {0, 1, 2};
    const Label one[] = {0};
    const Label dup[] = {1, 1};
    const Label range[] = {0, 3};
    CHECK_THROWS_AS(env.sample_winner(big, key, 0), DomainError);
    CHECK_THROWS_AS(env.sample_winner(one, key, 0), DomainError);
    CHECK_THROWS_AS(env.sample_winner(dup, key, 0), DomainError);
    CHECK_THROWS_AS(env.sample_winner(range, key, 0), DomainError);
    CHECK(env.queries() == 0);
}

TEST_CASE("sampling is a pure function of stream and index") {
    const Instance inst({4, 3, 2, 1}, 1, 4);
    const LabeledInstance truth = make_labeled(inst, 9);
    Environment a(truth);
    Environment b(truth);
    const Label set[] = {3, 0, 2};
    const StreamKey key = StreamKey::derive(1, 2);
    std::vector<std::uint32_t> counts(3, 0);
    a.sample_counts(set, 500, key, 17, counts);
    std::vector<std::uint32_t> manual(3, 0);
    for (std::uint64_t t = 0; t < 500; ++t) {
        const Label w = b.sample_winner(set, key, 17 + t);
        ++manual[static_cast<std::size_t>(std::find(std::begin(set), std::end(set), w) - std::begin(set))];
    }
    CHECK(counts == manual);

    const std::uint32_t fast = a.sample_pair_wins(3, 0, 300, key, 5);
    std::uint32_t slow = 0;
    const Label pair[] = {3, 0};
    for (std::uint64_t t = 0; t < 300; ++t) slow += b.sample_winner(pair, key, 5 + t) == 3 ? 1 : 0;
    CHECK(fast == slow);
    CHECK(a.queries() == b.queries());
}

TEST_CASE("make_labeled") {
    const Instance inst({3, 2, 1}, 1, 3);
    CHECK(perm(inst, 42) == perm(inst, 42));

    std::map<std::vector<Label>, int> seen;
    const int seeds = 10000;
    for (int s = 0; s < seeds; ++s) ++seen[perm(inst, static_cast<std::uint64_t>(s))];
    CHECK(seen.size() == 6);
    for (const auto& [perm, count] : seen) CHECK(std::abs(double(count) / seeds - 1.0 / 6) <= 0.02);

    const LabeledInstance truth = make_labeled(Instance({5, 4, 3, 2, 1}, 2, 2), 3);
    for (Rank r = 0; r < 5; ++r) CHECK(truth.rank_of(truth.label_of(r)) == r);
    CHECK(truth.is_correct(truth.top_labels()));
    const Label wrong[] = {truth.label_of(0), truth.label_of(2)};
    CHECK_FALSE(truth.is_correct(wrong));
    CHECK_THROWS_AS(LabeledInstance(inst, {0, 0, 1}, 1), InvalidInstance);
}

TEST_CASE("ledger counts every oracle call") {
    const Instance inst({8, 4, 2, 1, 1, 1}, 2, 3);
    const LabeledInstance truth = make_labeled(inst, 11);
    Environment env(truth, true);
    const StreamKey key = env.fresh_stream();
    const Label tri[] = {0, 1, 2};
    const Label duo[] = {4, 5};
    env.sample_winner(tri, key, 0);
    std::vector<std::uint32_t> counts(3, 0);
    env.sample_counts(tri, 10, key, 1, counts);
    env.sample_pair_wins(4, 5, 7, key, 0);
    env.sample_winner(duo, key, 99);
    CHECK(env.queries() == 19);
    CHECK(env.ledger().log().size() == env.queries());
    for (const QueryRecord& rec : env.ledger().log()) {
        CHECK(rec.set.size() >= 2);
        CHECK(rec.set.size() <= 3);
        CHECK(std::find(rec.set.begin(), rec.set.end(), rec.winner) != rec.set.end());
    }

    // Whole-algorithm runs: the logged length matches the running total.
    Environment run_env(make_labeled(Instance({100, 100, 1, 1, 1, 1}, 2, 2), 5), true);
    TopKConfig config;
    config.algorithm = Algorithm::Pairwise;
    config.pairwise.kappa = 2;
    const RunReport report = top_k(run_env, 2, config);
    CHECK(report.queries_used == run_env.ledger().log().size());
}

TEST_CASE("relabeling does not change the ranks selected") {
    const Instance inst({50, 40, 30, 1, 1, 1, 1, 1}, 3, 4);
    const std::uint64_t seed = 21;
    for (std::uint64_t p = 0; p < 5; ++p) {
        const LabeledInstance a(inst, perm(inst, p), seed);
        const LabeledInstance b(inst, perm(inst, p + 100), seed);

        PairwiseConfig pw;
        pw.kappa = 2;
        Environment env_a(a);
        Environment env_b(b);
        // Presenting labels in rank order matches randomness by rank.
        const auto out_a = alg_pairwise(env_a, a.pi(), 3, pw);
        const auto out_b = alg_pairwise(env_b, b.pi(), 3, pw);
        CHECK(ranks_of(a, out_a) == ranks_of(b, out_b));
        CHECK(env_a.queries() == env_b.queries());

        MultiwiseConfig mw;
        mw.kappa = 2;
        mw.alpha = 2;
        mw.Q = 64;
        Environment mw_a(a);
        Environment mw_b(b);
        const auto ra = alg_multiwise(mw_a, a.pi(), 3, mw);
        const auto rb = alg_multiwise(mw_b, b.pi(), 3, mw);
        CHECK(ranks_of(a, ra.selected) == ranks_of(b, rb.selected));
        CHECK(ranks_of(a, ra.remaining) == ranks_of(b, rb.remaining));
    }
}

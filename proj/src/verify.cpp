#include "rankbench/verify.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numeric>

namespace rankbench::verify {

TrialSummary wilson_summary(std::uint64_t successes, std::uint64_t trials, double z) {
    if (successes > trials) throw DomainError("successes exceed trials");
    TrialSummary out;
    out.trials = trials;
    out.successes = successes;
    if (trials == 0) return out;
    const double nt = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / nt;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nt;
    const double centre = (p + z2 / (2.0 * nt)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt)) / denom;
    out.estimate = p;
    out.lower = successes == 0 ? 0.0 : std::max(0.0, centre - half);
    out.upper = successes == trials ? 1.0 : std::min(1.0, centre + half);
    return out;
}

std::vector<double> exact_choice_distribution(const Instance& instance, std::span<const Rank> subset) {
    if (subset.size() < 2) throw DomainError("choice set needs at least two items");
    double total = 0.0;
    for (Rank r : subset) total += instance.theta(r);
    std::vector<double> probs;
    probs.reserve(subset.size());
    for (Rank r : subset) probs.push_back(instance.theta(r) / total);
    return probs;
}

ChiSquareResult chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> probabilities) {
    if (observed.size() != probabilities.size() || observed.size() < 2) {
        throw DomainError("chi-square needs matching vectors of at least two cells");
    }
    const double total = static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
    ChiSquareResult out;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double expected = total * probabilities[i];
        const double diff = static_cast<double>(observed[i]) - expected;
        out.statistic += diff * diff / expected;
    }
    out.dof = observed.size() - 1;
    const boost::math::chi_squared dist(static_cast<double>(out.dof));
    out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
    return out;
}

std::vector<std::vector<bool>> brute_force_dominance(std::size_t vertices, std::span<const LabeledEdge> edges,
                                                     std::size_t kappa) {
    if (vertices > kBruteForceMaxVertices) throw DomainError("brute-force dominance is limited to 7 vertices");
    struct Step {
        std::uint32_t to;
        bool strict;
    };
    std::vector<std::vector<Step>> out_steps(vertices);
    for (const LabeledEdge& e : edges) {
        if (e.a >= vertices || e.b >= vertices) throw DomainError("edge endpoint out of range");
        // A step u -> v is allowed when the label read from u's side is ~, >= or >.
        auto allow = [&](std::uint32_t u, std::uint32_t v, EdgeLabel from_u) {
            if (from_u == EdgeLabel::ApproxEq || from_u == EdgeLabel::GeqWeak) out_steps[u].push_back({v, false});
            if (from_u == EdgeLabel::GtStrong) out_steps[u].push_back({v, true});
        };
        allow(e.a, e.b, e.label);
        allow(e.b, e.a, mirror(e.label));
    }

    std::vector<std::vector<bool>> relation(vertices, std::vector<bool>(vertices, false));
    // Depth-first over every walk; no pruning so the enumeration stays
    // independent of the relaxation it checks.
    auto walk = [&](auto&& self, std::uint32_t source, std::uint32_t at, std::size_t used, bool strict) -> void {
        if (strict && at != source) relation[source][at] = true;
        if (used == kappa) return;
        for (const Step& step : out_steps[at]) self(self, source, step.to, used + 1, strict || step.strict);
    };
    for (std::uint32_t s = 0; s < vertices; ++s) walk(walk, s, s, 0, false);
    return relation;
}

BinomialCheck binomial_bounds_check(std::uint64_t m, double p, double C, std::size_t n, std::size_t trials,
                                    std::uint64_t seed) {
    if (m < 1) throw DomainError("m must be at least 1");
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0, 1]");
    if (n < 2) throw DomainError("n must be at least 2");
    const double mean = static_cast<double>(m) * p;
    const double half = C * std::sqrt(mean * std::log(static_cast<double>(n)));
    BinomialCheck out;
    out.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        const StreamKey key = StreamKey::derive(seed, t);
        std::uint64_t x = 0;
        for (std::uint64_t i = 0; i < m; ++i) x += key.uniform(i) < p ? 1 : 0;
        const auto xd = static_cast<double>(x);
        if (xd >= mean - half && xd <= mean + half) ++out.inside;
    }
    out.pass_rate = trials == 0 ? 1.0 : static_cast<double>(out.inside) / static_cast<double>(trials);
    out.passed = out.pass_rate >= 1.0 - 1.0 / static_cast<double>(n);
    return out;
}

TrialSummary estimate_success(const Instance& instance, const TopKConfig& config,
                              std::span<const std::uint64_t> seeds, std::vector<RunOutcome>* outcomes,
                              std::size_t threads) {
    std::vector<RunOutcome> results(seeds.size());
    parallel_for(seeds.size(), threads, [&](std::size_t i) { results[i] = run_seed(instance, config, seeds[i]); });
    const auto successes = static_cast<std::uint64_t>(
        std::count_if(results.begin(), results.end(), [](const RunOutcome& r) { return r.success; }));
    if (outcomes != nullptr) *outcomes = std::move(results);
    return wilson_summary(successes, seeds.size());
}

namespace {

std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
        const double rank = (static_cast<double>(i + j - 1)) / 2.0 + 1.0;
        for (std::size_t t = i; t < j; ++t) ranks[order[t]] = rank;
        i = j;
    }
    return ranks;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("spearman needs two samples of equal size >= 2");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace rankbench::verify

#include "rankbench/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "rankbench/complexity.hpp"

namespace rankbench {

const char* const kCsvHeader = "instance_id,n,k,l,algorithm,seed,queries_used,success,elapsed_ms,bound_total";

const char* to_string(Family family) noexcept {
    switch (family) {
        case Family::Geometric: return "geometric";
        case Family::TwoBlock: return "two-block";
        case Family::NearTie: return "near-tie";
        case Family::Custom: return "custom";
    }
    return "unknown";
}

Family parse_family(std::string_view name) {
    if (name == "geometric") return Family::Geometric;
    if (name == "two-block") return Family::TwoBlock;
    if (name == "near-tie") return Family::NearTie;
    if (name == "custom") return Family::Custom;
    throw InvalidInstance("unknown family '" + std::string(name) + "'");
}

namespace {

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string short_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

Instance generate(Family family, const FamilyParams& p) {
    if (family == Family::Custom) return Instance(p.custom_theta, p.k, p.l);
    if (p.n < 2) throw InvalidInstance("n must be at least 2");
    std::vector<double> theta(p.n);
    switch (family) {
        case Family::Geometric:
            if (!(p.rho > 0.0 && p.rho <= 1.0)) throw InvalidInstance("rho must lie in (0, 1]");
            if (p.rho == 1.0 && !p.allow_tie) throw InvalidInstance("rho = 1 makes every item tied (use --allow-tie)");
            for (std::size_t i = 0; i < p.n; ++i) theta[i] = std::pow(p.rho, static_cast<double>(i));
            break;
        case Family::TwoBlock:
            if (!(p.theta_lo > 0.0) || !(p.theta_hi >= p.theta_lo) || !std::isfinite(p.theta_hi)) {
                throw InvalidInstance("two-block needs theta_hi >= theta_lo > 0");
            }
            if (p.theta_hi == p.theta_lo && !p.allow_tie) {
                throw InvalidInstance("theta_hi = theta_lo ties the k-th and (k+1)-th items (use --allow-tie)");
            }
            for (std::size_t i = 0; i < p.n; ++i) theta[i] = i < p.k ? p.theta_hi : p.theta_lo;
            break;
        case Family::NearTie:
            if (!(p.epsilon >= 0.0) || !std::isfinite(p.epsilon)) throw InvalidInstance("epsilon must be >= 0");
            if (p.epsilon == 0.0 && !p.allow_tie) {
                throw InvalidInstance("epsilon = 0 ties the k-th and (k+1)-th items (use --allow-tie)");
            }
            for (std::size_t i = 0; i < p.n; ++i) theta[i] = i < p.k ? 1.0 + p.epsilon : 1.0;
            break;
        case Family::Custom: break;
    }
    return Instance(std::move(theta), p.k, p.l);
}

std::string family_id(Family family, const FamilyParams& p) {
    switch (family) {
        case Family::Geometric: return "geometric(rho=" + short_double(p.rho) + ")";
        case Family::TwoBlock:
            return "two-block(hi=" + short_double(p.theta_hi) + ",lo=" + short_double(p.theta_lo) + ")";
        case Family::NearTie: return "near-tie(eps=" + short_double(p.epsilon) + ")";
        case Family::Custom: return "custom";
    }
    return "unknown";
}

TopKConfig make_config(std::size_t n, Algorithm algorithm, const ConfigOverrides& o) {
    TopKConfig config = TopKConfig::for_items(n);
    config.algorithm = algorithm;
    if (o.kappa) {
        config.pairwise.kappa = *o.kappa;
        config.multiwise.kappa = *o.kappa;
        config.multiwise.alpha = static_cast<double>(*o.kappa);
    }
    if (o.alpha) config.multiwise.alpha = *o.alpha;
    if (o.budget) {
        config.max_total_queries = *o.budget;
        // The driver enforces the global budget (zero included); phase caps must stay positive.
        config.pairwise.max_total_queries = std::max<std::uint64_t>(*o.budget, 1);
        config.multiwise.max_total_queries = std::max<std::uint64_t>(*o.budget, 1);
    }
    if (o.l_threshold_factor) config.multiwise.l_threshold_factor = *o.l_threshold_factor;
    config.pairwise.validate();
    config.multiwise.validate();
    return config;
}

void ExperimentSpec::validate() const {
    if (seeds.empty()) throw InvalidInstance("seed list must not be empty");
    (void)make_config(instance.n(), algorithm, overrides);
}

std::vector<std::uint64_t> seed_range(std::uint64_t start, std::size_t count) {
    std::vector<std::uint64_t> seeds(count);
    for (std::size_t i = 0; i < count; ++i) seeds[i] = start + i;
    return seeds;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

bool ExperimentResult::any_invariant_breach() const {
    return std::any_of(outcomes.begin(), outcomes.end(),
                       [](const RunOutcome& o) { return o.status == RunStatus::InvariantBreach; });
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const TopKConfig config = make_config(spec.instance.n(), spec.algorithm, spec.overrides);
    ExperimentResult result;
    result.resolved_algorithm = to_string(resolve_algorithm(spec.instance.n(), spec.instance.l(), config));
    result.bound_total = upper_bound(spec.instance).total;
    result.outcomes.resize(spec.seeds.size());
    parallel_for(spec.seeds.size(), spec.threads,
                 [&](std::size_t i) { result.outcomes[i] = run_seed(spec.instance, config, spec.seeds[i]); });
    return result;
}

void write_csv(std::ostream& out, const ExperimentSpec& spec, const ExperimentResult& result) {
    out << kCsvHeader << '\n';
    const Instance& inst = spec.instance;
    const std::string prefix = csv_escape(spec.instance_id) + ',' + std::to_string(inst.n()) + ',' +
                               std::to_string(inst.k()) + ',' + std::to_string(inst.l()) + ',' +
                               csv_escape(result.resolved_algorithm) + ',';
    const std::string bound = format_double(result.bound_total);
    char elapsed[32];
    for (const RunOutcome& o : result.outcomes) {
        std::snprintf(elapsed, sizeof elapsed, "%.3f", o.elapsed_ms);
        out << prefix << o.seed << ',' << o.report.queries_used << ',' << (o.success ? 1 : 0) << ',' << elapsed
            << ',' << bound << '\n';
    }
}

}  // namespace rankbench

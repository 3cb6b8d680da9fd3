// rankbench: generate instances, run seeded experiments, print bounds and
// run the statistical self-checks.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "rankbench/complexity.hpp"
#include "rankbench/experiment.hpp"
#include "rankbench/instance_io.hpp"
#include "rankbench/kernels.hpp"
#include "rankbench/verify.hpp"

namespace {

using namespace rankbench;

constexpr int kExitOk = 0;
constexpr int kExitSpec = 1;
constexpr int kExitInvariant = 2;

struct InstanceOptions {
    std::string instance_path;
    std::string family = "geometric";
    FamilyParams params;
    std::string custom_theta;
};

void add_instance_options(CLI::App* app, InstanceOptions& o) {
    app->add_option("--instance", o.instance_path, "Instance JSON file");
    app->add_option("--family", o.family, "geometric | two-block | near-tie | custom")->capture_default_str();
    app->add_option("--n", o.params.n, "Number of items");
    app->add_option("--k", o.params.k, "Top-k size")->capture_default_str();
    app->add_option("--l", o.params.l, "Maximum comparison set size")->capture_default_str();
    app->add_option("--rho", o.params.rho, "geometric ratio")->capture_default_str();
    app->add_option("--theta-hi", o.params.theta_hi, "two-block top score")->capture_default_str();
    app->add_option("--theta-lo", o.params.theta_lo, "two-block bottom score")->capture_default_str();
    app->add_option("--epsilon", o.params.epsilon, "near-tie gap")->capture_default_str();
    app->add_option("--theta", o.custom_theta, "custom scores, comma separated, descending");
    app->add_flag("--allow-tie", o.params.allow_tie, "Accept theta_k == theta_{k+1}");
}

std::pair<std::string, Instance> load_instance(InstanceOptions& o) {
    if (!o.instance_path.empty()) {
        InstanceFile file = read_instance(o.instance_path);
        return {std::filesystem::path(o.instance_path).stem().string(), std::move(file.instance)};
    }
    const Family family = parse_family(o.family);
    if (family == Family::Custom) {
        o.params.custom_theta.clear();
        std::size_t pos = 0;
        while (pos < o.custom_theta.size()) {
            const std::size_t comma = std::min(o.custom_theta.find(',', pos), o.custom_theta.size());
            try {
                o.params.custom_theta.push_back(std::stod(o.custom_theta.substr(pos, comma - pos)));
            } catch (const std::exception&) {
                throw InvalidInstance("--theta entry '" + o.custom_theta.substr(pos, comma - pos) +
                                      "' is not a number");
            }
            pos = comma + 1;
        }
    }
    return {family_id(family, o.params), generate(family, o.params)};
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("RANKBENCH_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw InvalidInstance(std::string("RANKBENCH_SEED='") + env + "' is not a uint64");
        }
    }
    return 1;
}

int cmd_gen(InstanceOptions& o, std::optional<std::uint64_t> seed, const std::string& out) {
    auto [id, instance] = load_instance(o);
    const std::string doc = dump_instance(instance, seed ? seed : std::optional<std::uint64_t>(default_seed()));
    if (out.empty() || out == "-") {
        std::cout << doc;
    } else {
        std::ofstream file(out);
        if (!file) throw std::runtime_error("cannot write " + out);
        file << doc;
    }
    return kExitOk;
}

int cmd_bound(InstanceOptions& o) {
    auto [id, instance] = load_instance(o);
    const ComplexityBreakdown b = upper_bound(instance);
    std::cout << "instance " << id << " (n=" << instance.n() << ", k=" << instance.k() << ", l=" << instance.l()
              << ")\n";
    std::cout << format_breakdown(b);
    if (instance.l() <= 4) std::cout << "simplified (constant l): " << simplified_constant_l(instance) << '\n';
    const BigLSides sides = big_l_sides(instance);
    std::cout << "big-l check: lhs=" << sides.lhs << " rhs=" << sides.rhs << ' '
              << (check_big_l(instance) ? "ok" : "violated") << '\n';
    return kExitOk;
}

struct RunOptions {
    std::string algorithm = "auto";
    std::size_t seeds = 10;
    std::optional<std::uint64_t> seed_start;
    std::optional<std::size_t> kappa;
    std::optional<double> alpha;
    std::optional<std::uint64_t> budget;
    std::optional<double> l_factor;
    std::size_t threads = 0;
    std::string out;
};

int cmd_run(InstanceOptions& o, const RunOptions& r) {
    auto [id, instance] = load_instance(o);
    ExperimentSpec spec{id, instance, parse_algorithm(r.algorithm),
                        seed_range(r.seed_start ? *r.seed_start : default_seed(), r.seeds),
                        {r.kappa, r.alpha, r.budget, r.l_factor}, r.threads};
    const ExperimentResult result = run_experiment(spec);
    if (r.out.empty() || r.out == "-") {
        write_csv(std::cout, spec, result);
    } else {
        std::ofstream file(r.out);
        if (!file) throw std::runtime_error("cannot write " + r.out);
        write_csv(file, spec, result);
        if (!file.flush()) throw std::runtime_error("write to " + r.out + " failed");
    }
    for (const RunOutcome& outcome : result.outcomes) {
        if (outcome.status != RunStatus::Completed) {
            std::cerr << "seed " << outcome.seed << ": " << to_string(outcome.status) << ": " << outcome.message
                      << '\n';
        }
    }
    return result.any_invariant_breach() ? kExitInvariant : kExitOk;
}

int cmd_verify(InstanceOptions& o, std::size_t draws, std::uint64_t seed) {
    auto [id, instance] = load_instance(o);
    int failures = 0;
    std::cout << "kernels: " << kernels::isa_name(kernels::active_isa()) << '\n';

    // Oracle fidelity on the first min(n, l) ranks and on the whole top-l window.
    std::vector<Rank> subset;
    for (Rank r = 0; r < std::min(instance.n(), instance.l()); ++r) subset.push_back(r);
    const LabeledInstance truth = make_labeled(instance, seed);
    Environment env(truth);
    std::vector<Label> set;
    for (Rank r : subset) set.push_back(truth.label_of(r));
    std::vector<std::uint32_t> counts(set.size(), 0);
    env.sample_counts(set, static_cast<std::uint32_t>(draws), env.fresh_stream(), 0, counts);
    const std::vector<std::uint64_t> observed(counts.begin(), counts.end());
    const auto chi = verify::chi_square_gof(observed, verify::exact_choice_distribution(instance, subset));
    const bool chi_ok = chi.p_value >= verify::significance::kChiSquareAlpha;
    failures += chi_ok ? 0 : 1;
    std::cout << "oracle chi-square: stat=" << chi.statistic << " dof=" << chi.dof << " p=" << chi.p_value << ' '
              << (chi_ok ? "PASS" : "FAIL") << '\n';

    const auto upper = upper_bound(instance);
    const auto lower = lower_bound(instance);
    const bool bounds_ok = upper.total == lower.total || (upper.unbounded() && lower.unbounded());
    failures += bounds_ok ? 0 : 1;
    std::cout << "bounds agree: " << (bounds_ok ? "PASS" : "FAIL") << '\n';
    const bool big_l = check_big_l(instance);
    failures += big_l ? 0 : 1;
    std::cout << "big-l inequality: " << (big_l ? "PASS" : "FAIL") << '\n';
    return failures == 0 ? kExitOk : kExitSpec;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Active top-k ranking under the MNL choice model"};
    app.require_subcommand(1);

    InstanceOptions inst;
    std::optional<std::uint64_t> gen_seed;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "Write an instance JSON file");
    add_instance_options(gen, inst);
    gen->add_option("--seed", gen_seed, "Seed stored in the file (default RANKBENCH_SEED or 1)");
    gen->add_option("--out", gen_out, "Output path (default stdout)");

    RunOptions run_opts;
    auto* run = app.add_subcommand("run", "Run seeded trials and emit CSV");
    add_instance_options(run, inst);
    run->add_option("--algorithm", run_opts.algorithm, "pairwise | multiwise | auto")->capture_default_str();
    run->add_option("--seeds", run_opts.seeds, "Number of seeds")->capture_default_str();
    run->add_option("--seed-start", run_opts.seed_start, "First seed (default RANKBENCH_SEED or 1)");
    run->add_option("--kappa", run_opts.kappa, "Override kappa");
    run->add_option("--alpha", run_opts.alpha, "Override multiwise alpha");
    run->add_option("--budget", run_opts.budget, "Global query budget per seed");
    run->add_option("--l-threshold-factor", run_opts.l_factor, "Auto picks multiwise iff l >= f * ceil(log2 n)");
    run->add_option("--threads", run_opts.threads, "Worker threads (0 = all cores)")->capture_default_str();
    run->add_option("--out", run_opts.out, "CSV path (default stdout)");

    auto* bound = app.add_subcommand("bound", "Print the instance complexity breakdown");
    add_instance_options(bound, inst);

    std::size_t verify_draws = 100000;
    std::uint64_t verify_seed = 1;
    auto* ver = app.add_subcommand("verify", "Statistical self-checks on an instance");
    add_instance_options(ver, inst);
    ver->add_option("--draws", verify_draws, "Oracle draws")->capture_default_str();
    ver->add_option("--seed", verify_seed, "Seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitSpec;
    }

    try {
        if (*gen) return cmd_gen(inst, gen_seed, gen_out);
        if (*run) return cmd_run(inst, run_opts);
        if (*bound) return cmd_bound(inst);
        if (*ver) return cmd_verify(inst, verify_draws, verify_seed);
    } catch (const InvariantBreach& e) {
        std::cerr << "internal invariant breach: " << e.what() << '\n';
        return kExitInvariant;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSpec;
    }
    return kExitSpec;
}

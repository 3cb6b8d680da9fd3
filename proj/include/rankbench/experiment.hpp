#pragma once

// Instance families and the seeded experiment runner behind the CLI.
//
// CSV columns, in order (RFC-4180 quoting, one row per seed, seed order):
//   instance_id   family tag or file stem
//   n, k, l       instance shape
//   algorithm     resolved algorithm: pairwise | multiwise
//   seed          permutation/oracle seed for the row
//   queries_used  oracle queries spent, including partial runs
//   success       1 iff exactly the top-k labels were returned
//   elapsed_ms    wall time of the seed; not reproducible
//   bound_total   instance complexity total, "inf" on a tie

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rankbench/core_model.hpp"
#include "rankbench/harness.hpp"
#include "rankbench/multiwise.hpp"

namespace rankbench {

enum class Family : std::uint8_t { Geometric, TwoBlock, NearTie, Custom };

const char* to_string(Family family) noexcept;
Family parse_family(std::string_view name);

struct FamilyParams {
    std::size_t n = 0;
    std::size_t k = 1;
    std::size_t l = 2;
    double rho = 0.5;        ///< geometric: theta_i = rho^(i-1), rho in (0, 1]
    double theta_hi = 100.0; ///< two-block: top k at theta_hi, rest at theta_lo
    double theta_lo = 1.0;
    double epsilon = 0.1;    ///< near-tie: top k at 1 + epsilon, rest at 1
    std::vector<double> custom_theta;
    bool allow_tie = false;
};

/// Throws InvalidInstance for bad family parameters, including a zero gap
/// (rho = 1, theta_hi = theta_lo, epsilon = 0) unless allow_tie is set.
Instance generate(Family family, const FamilyParams& params);

/// Short stable tag such as "geometric(rho=0.6)".
std::string family_id(Family family, const FamilyParams& params);

struct ConfigOverrides {
    std::optional<std::size_t> kappa;
    std::optional<double> alpha;
    std::optional<std::uint64_t> budget;
    std::optional<double> l_threshold_factor;
};

/// Defaults for n with overrides applied to both phases.
TopKConfig make_config(std::size_t n, Algorithm algorithm, const ConfigOverrides& overrides);

struct ExperimentSpec {
    std::string instance_id;
    Instance instance;
    Algorithm algorithm = Algorithm::Auto;
    std::vector<std::uint64_t> seeds;
    ConfigOverrides overrides;
    std::size_t threads = 0;

    void validate() const;
};

/// `count` consecutive seeds starting at `start`.
std::vector<std::uint64_t> seed_range(std::uint64_t start, std::size_t count);

extern const char* const kCsvHeader;

std::string csv_escape(std::string_view field);

struct ExperimentResult {
    std::vector<RunOutcome> outcomes;  ///< seed order
    std::string resolved_algorithm;
    double bound_total = 0.0;

    bool any_invariant_breach() const;
};

/// Runs every seed (on a worker pool) and never aborts on a per-seed failure.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Header plus one row per outcome, each terminated by "\n".
void write_csv(std::ostream& out, const ExperimentSpec& spec, const ExperimentResult& result);

}  // namespace rankbench

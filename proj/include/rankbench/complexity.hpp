#pragma once

// Instance-hardness expressions for top-k identification under MNL.
//
// With 1-based ranks:
//   n/l + k + sum_{i>k} theta_i/theta_k
//       + sum_{i>k, theta_i >= theta_k/2}     theta_k^2     / (theta_k - theta_i)^2
//       + sum_{i<=k, theta_i <= 2 theta_{k+1}} theta_{k+1}^2 / (theta_{k+1} - theta_i)^2
// is both the upper bound achieved by the algorithms (up to polylog factors)
// and the lower bound for any algorithm. A tie theta_k == theta_{k+1} makes
// it unbounded.

#include <string>

#include "rankbench/core_model.hpp"

namespace rankbench {

struct ComplexityBreakdown {
    double term_n_over_l = 0.0;
    double term_k = 0.0;
    double term_tail_mass = 0.0;
    double term_bottom_gap = 0.0;
    double term_top_gap = 0.0;
    double total = 0.0;

    bool unbounded() const noexcept;
};

ComplexityBreakdown upper_bound(const Instance& instance);
ComplexityBreakdown lower_bound(const Instance& instance);

/// Constant-l form: sum_{i>k} theta_k^2/(theta_k-theta_i)^2
///                + sum_{i<=k} theta_i^2/(theta_{k+1}-theta_i)^2.
/// +infinity on a tie.
double simplified_constant_l(const Instance& instance);

/// The inequality that makes multi-wise comparisons pointless once k or the
/// tail mass is linear in m (evaluated with m = n). Ties count as satisfied.
bool check_big_l(const Instance& instance);

/// Both sides of check_big_l, for reporting.
struct BigLSides {
    double lhs;
    double rhs;
};
BigLSides big_l_sides(const Instance& instance);

/// Human-readable multi-line breakdown.
std::string format_breakdown(const ComplexityBreakdown& breakdown);

}  // namespace rankbench

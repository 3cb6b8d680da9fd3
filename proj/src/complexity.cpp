#include "rankbench/complexity.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace rankbench {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Neumaier-compensated sum; terms span many orders of magnitude.
class CompensatedSum {
public:
    void add(double x) noexcept {
        if (std::isinf(x) || std::isinf(sum_)) {
            sum_ += x;
            return;
        }
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return std::isinf(sum_) ? sum_ : sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

// scale^2 / (scale - x)^2 with a zero denominator mapped to +infinity.
double gap_ratio(double scale, double x) {
    const double d = scale - x;
    if (d == 0.0) return kInf;
    return (scale * scale) / (d * d);
}

// Same shape with a different numerator.
double gap_ratio(double numerator, double scale, double x) {
    const double d = scale - x;
    if (d == 0.0) return kInf;
    return (numerator * numerator) / (d * d);
}

ComplexityBreakdown evaluate(const Instance& instance) {
    const auto theta = instance.theta();
    const std::size_t n = instance.n();
    const std::size_t k = instance.k();
    const double theta_k = theta[k - 1];
    const double theta_next = theta[k];

    CompensatedSum tail;
    CompensatedSum bottom;
    CompensatedSum top;
    for (std::size_t i = k; i < n; ++i) {
        tail.add(theta[i] / theta_k);
        if (theta[i] >= theta_k / 2.0) bottom.add(gap_ratio(theta_k, theta[i]));
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (theta[i] <= 2.0 * theta_next) top.add(gap_ratio(theta_next, theta[i]));
    }

    ComplexityBreakdown out;
    out.term_n_over_l = static_cast<double>(n) / static_cast<double>(instance.l());
    out.term_k = static_cast<double>(k);
    out.term_tail_mass = tail.value();
    out.term_bottom_gap = bottom.value();
    out.term_top_gap = top.value();

    CompensatedSum total;
    for (double term : {out.term_n_over_l, out.term_k, out.term_tail_mass, out.term_bottom_gap, out.term_top_gap}) {
        total.add(term);
    }
    out.total = total.value();
    return out;
}

}  // namespace

bool ComplexityBreakdown::unbounded() const noexcept { return std::isinf(total); }

ComplexityBreakdown upper_bound(const Instance& instance) { return evaluate(instance); }

ComplexityBreakdown lower_bound(const Instance& instance) { return evaluate(instance); }

double simplified_constant_l(const Instance& instance) {
    const auto theta = instance.theta();
    const std::size_t k = instance.k();
    const double theta_k = theta[k - 1];
    const double theta_next = theta[k];
    CompensatedSum sum;
    for (std::size_t i = k; i < instance.n(); ++i) sum.add(gap_ratio(theta_k, theta[i]));
    for (std::size_t i = 0; i < k; ++i) sum.add(gap_ratio(theta[i], theta_next, theta[i]));
    return sum.value();
}

BigLSides big_l_sides(const Instance& instance) {
    const auto theta = instance.theta();
    const std::size_t m = instance.n();
    const std::size_t k = instance.k();
    const double theta_k = theta[k - 1];
    const double theta_next = theta[k];

    CompensatedSum full_bottom;
    for (std::size_t i = k; i < m; ++i) full_bottom.add(gap_ratio(theta_k, theta[i]));
    CompensatedSum full_top;
    for (std::size_t i = 0; i < k; ++i) full_top.add(gap_ratio(theta_next, theta[i]));

    const ComplexityBreakdown b = evaluate(instance);
    CompensatedSum lhs;
    lhs.add(static_cast<double>(k));
    lhs.add(full_bottom.value());
    lhs.add(full_top.value());

    CompensatedSum rhs;
    rhs.add(b.term_n_over_l);
    rhs.add(b.term_k);
    rhs.add(b.term_tail_mass);
    rhs.add(b.term_bottom_gap);
    rhs.add(full_top.value());
    rhs.add(4.0 * static_cast<double>(m));
    return {lhs.value(), rhs.value()};
}

bool check_big_l(const Instance& instance) {
    const BigLSides sides = big_l_sides(instance);
    if (std::isinf(sides.lhs) && std::isinf(sides.rhs)) return true;
    return sides.lhs <= sides.rhs;
}

std::string format_breakdown(const ComplexityBreakdown& b) {
    auto fmt = [](double x) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.10g", x);
        return std::string(buf);
    };
    std::string out;
    out += "n_over_l    " + fmt(b.term_n_over_l) + "\n";
    out += "k           " + fmt(b.term_k) + "\n";
    out += "tail_mass   " + fmt(b.term_tail_mass) + "\n";
    out += "bottom_gap  " + fmt(b.term_bottom_gap) + "\n";
    out += "top_gap     " + fmt(b.term_top_gap) + "\n";
    if (b.unbounded()) {
        out += "total       unbounded (θ_k = θ_{k+1})\n";
    } else {
        out += "total       " + fmt(b.total) + "\n";
    }
    return out;
}

}  // namespace rankbench

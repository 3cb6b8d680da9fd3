#include <bit>

#include "rankbench/edge_label.hpp"
#include "rankbench/kernels.hpp"

namespace rankbench::kernels::scalar {

void label_edges(std::span<const double> forward, std::span<const double> reverse, double lo,
                 double hi, std::span<std::uint8_t> out) {
    for (std::size_t e = 0; e < forward.size(); ++e) {
        const double a = forward[e];
        const double b = reverse[e];
        EdgeLabel label = EdgeLabel::ApproxEq;
        if (a >= hi * b && a > 0.0) {
            label = EdgeLabel::GtStrong;
        } else if (b >= hi * a && b > 0.0) {
            label = EdgeLabel::LtStrong;
        } else if (a > lo * b) {
            label = EdgeLabel::GeqWeak;
        } else if (b > lo * a) {
            label = EdgeLabel::LeqWeak;
        }
        out[e] = static_cast<std::uint8_t>(label);
    }
}

std::size_t count_scaled_at_most(std::span<const double> values, double scale, double bound) {
    std::size_t count = 0;
    for (double v : values) count += (v * scale <= bound) ? 1 : 0;
    return count;
}

bool or_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
    std::uint64_t fresh = 0;
    for (std::size_t w = 0; w < dst.size(); ++w) {
        fresh |= src[w] & ~dst[w];
        dst[w] |= src[w];
    }
    return fresh != 0;
}

}  // namespace rankbench::kernels::scalar

#include <arm_neon.h>

#include "rankbench/edge_label.hpp"
#include "rankbench/kernels.hpp"

namespace rankbench::kernels::neon {

void label_edges(std::span<const double> forward, std::span<const double> reverse, double lo,
                 double hi, std::span<std::uint8_t> out) {
    const std::size_t n = forward.size();
    const float64x2_t vlo = vdupq_n_f64(lo);
    const float64x2_t vhi = vdupq_n_f64(hi);
    const float64x2_t zero = vdupq_n_f64(0.0);
    const uint64x2_t code_geq = vdupq_n_u64(static_cast<std::uint64_t>(EdgeLabel::GeqWeak));
    const uint64x2_t code_gt = vdupq_n_u64(static_cast<std::uint64_t>(EdgeLabel::GtStrong));
    const uint64x2_t code_leq = vdupq_n_u64(static_cast<std::uint64_t>(EdgeLabel::LeqWeak));
    const uint64x2_t code_lt = vdupq_n_u64(static_cast<std::uint64_t>(EdgeLabel::LtStrong));

    std::size_t e = 0;
    for (; e + 2 <= n; e += 2) {
        const float64x2_t a = vld1q_f64(forward.data() + e);
        const float64x2_t b = vld1q_f64(reverse.data() + e);
        const uint64x2_t gt = vandq_u64(vcgeq_f64(a, vmulq_f64(vhi, b)), vcgtq_f64(a, zero));
        const uint64x2_t lt = vandq_u64(vcgeq_f64(b, vmulq_f64(vhi, a)), vcgtq_f64(b, zero));
        const uint64x2_t geq = vcgtq_f64(a, vmulq_f64(vlo, b));
        const uint64x2_t leq = vcgtq_f64(b, vmulq_f64(vlo, a));

        uint64x2_t code = vdupq_n_u64(0);
        code = vbslq_u64(leq, code_leq, code);
        code = vbslq_u64(geq, code_geq, code);
        code = vbslq_u64(lt, code_lt, code);
        code = vbslq_u64(gt, code_gt, code);
        out[e] = static_cast<std::uint8_t>(vgetq_lane_u64(code, 0));
        out[e + 1] = static_cast<std::uint8_t>(vgetq_lane_u64(code, 1));
    }
    if (e < n) {
        scalar::label_edges(forward.subspan(e), reverse.subspan(e), lo, hi, out.subspan(e));
    }
}

std::size_t count_scaled_at_most(std::span<const double> values, double scale, double bound) {
    const std::size_t n = values.size();
    const float64x2_t vscale = vdupq_n_f64(scale);
    const float64x2_t vbound = vdupq_n_f64(bound);
    uint64x2_t acc = vdupq_n_u64(0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const uint64x2_t hit = vcleq_f64(vmulq_f64(vld1q_f64(values.data() + i), vscale), vbound);
        acc = vsubq_u64(acc, hit);  // all-ones lanes count as +1
    }
    const std::size_t count = vgetq_lane_u64(acc, 0) + vgetq_lane_u64(acc, 1);
    return count + scalar::count_scaled_at_most(values.subspan(i), scale, bound);
}

bool or_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
    const std::size_t n = dst.size();
    uint64x2_t fresh = vdupq_n_u64(0);
    std::size_t w = 0;
    for (; w + 2 <= n; w += 2) {
        const uint64x2_t old = vld1q_u64(dst.data() + w);
        const uint64x2_t add = vld1q_u64(src.data() + w);
        fresh = vorrq_u64(fresh, vbicq_u64(add, old));
        vst1q_u64(dst.data() + w, vorrq_u64(old, add));
    }
    const bool changed = (vgetq_lane_u64(fresh, 0) | vgetq_lane_u64(fresh, 1)) != 0;
    const bool tail = scalar::or_into(dst.subspan(w), src.subspan(w));
    return changed || tail;
}

}  // namespace rankbench::kernels::neon

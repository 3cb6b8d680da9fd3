// Compiled with -mavx2; only reached through dispatch after a CPUID check.

#include <immintrin.h>

#include <bit>

#include "rankbench/edge_label.hpp"
#include "rankbench/kernels.hpp"

namespace rankbench::kernels::avx2 {

void label_edges(std::span<const double> forward, std::span<const double> reverse, double lo,
                 double hi, std::span<std::uint8_t> out) {
    const std::size_t n = forward.size();
    const __m256d vlo = _mm256_set1_pd(lo);
    const __m256d vhi = _mm256_set1_pd(hi);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d code_geq = _mm256_set1_pd(static_cast<double>(EdgeLabel::GeqWeak));
    const __m256d code_gt = _mm256_set1_pd(static_cast<double>(EdgeLabel::GtStrong));
    const __m256d code_leq = _mm256_set1_pd(static_cast<double>(EdgeLabel::LeqWeak));
    const __m256d code_lt = _mm256_set1_pd(static_cast<double>(EdgeLabel::LtStrong));

    std::size_t e = 0;
    for (; e + 4 <= n; e += 4) {
        const __m256d a = _mm256_loadu_pd(forward.data() + e);
        const __m256d b = _mm256_loadu_pd(reverse.data() + e);
        const __m256d hb = _mm256_mul_pd(vhi, b);
        const __m256d ha = _mm256_mul_pd(vhi, a);
        const __m256d lb = _mm256_mul_pd(vlo, b);
        const __m256d la = _mm256_mul_pd(vlo, a);
        const __m256d gt = _mm256_and_pd(_mm256_cmp_pd(a, hb, _CMP_GE_OQ), _mm256_cmp_pd(a, zero, _CMP_GT_OQ));
        const __m256d lt = _mm256_and_pd(_mm256_cmp_pd(b, ha, _CMP_GE_OQ), _mm256_cmp_pd(b, zero, _CMP_GT_OQ));
        const __m256d geq = _mm256_cmp_pd(a, lb, _CMP_GT_OQ);
        const __m256d leq = _mm256_cmp_pd(b, la, _CMP_GT_OQ);

        // Lowest priority first so later blends win, mirroring the scalar
        // if/else chain.
        __m256d code = _mm256_setzero_pd();
        code = _mm256_blendv_pd(code, code_leq, leq);
        code = _mm256_blendv_pd(code, code_geq, geq);
        code = _mm256_blendv_pd(code, code_lt, lt);
        code = _mm256_blendv_pd(code, code_gt, gt);

        alignas(16) std::int32_t lanes[4];
        _mm_store_si128(reinterpret_cast<__m128i*>(lanes), _mm256_cvttpd_epi32(code));
        for (int j = 0; j < 4; ++j) out[e + j] = static_cast<std::uint8_t>(lanes[j]);
    }
    if (e < n) {
        scalar::label_edges(forward.subspan(e), reverse.subspan(e), lo, hi, out.subspan(e));
    }
}

std::size_t count_scaled_at_most(std::span<const double> values, double scale, double bound) {
    const std::size_t n = values.size();
    const __m256d vscale = _mm256_set1_pd(scale);
    const __m256d vbound = _mm256_set1_pd(bound);
    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_mul_pd(_mm256_loadu_pd(values.data() + i), vscale);
        const int mask = _mm256_movemask_pd(_mm256_cmp_pd(v, vbound, _CMP_LE_OQ));
        count += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(mask)));
    }
    return count + scalar::count_scaled_at_most(values.subspan(i), scale, bound);
}

bool or_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
    const std::size_t n = dst.size();
    __m256i fresh = _mm256_setzero_si256();
    std::size_t w = 0;
    for (; w + 4 <= n; w += 4) {
        auto* d = reinterpret_cast<__m256i*>(dst.data() + w);
        const __m256i old = _mm256_loadu_si256(d);
        const __m256i add = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src.data() + w));
        fresh = _mm256_or_si256(fresh, _mm256_andnot_si256(old, add));
        _mm256_storeu_si256(d, _mm256_or_si256(old, add));
    }
    const bool changed = !_mm256_testz_si256(fresh, fresh);
    const bool tail = scalar::or_into(dst.subspan(w), src.subspan(w));
    return changed || tail;
}

}  // namespace rankbench::kernels::avx2

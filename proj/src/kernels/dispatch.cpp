#include <atomic>
#include <cstdlib>
#include <cstring>

#include "rankbench/kernels.hpp"

namespace rankbench::kernels {

namespace {

Isa initial_isa() noexcept {
    const char* env = std::getenv("RANKBENCH_KERNELS");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return Isa::Scalar;
    return detect_isa();
}

std::atomic<Isa>& active() noexcept {
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

}  // namespace

const char* isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
    }
    return "unknown";
}

bool supported(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2:
#ifdef RANKBENCH_HAVE_AVX2_KERNELS
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::Neon:
#ifdef RANKBENCH_HAVE_NEON_KERNELS
            return true;
#else
            return false;
#endif
    }
    return false;
}

Isa detect_isa() noexcept {
    if (supported(Isa::Avx2)) return Isa::Avx2;
    if (supported(Isa::Neon)) return Isa::Neon;
    return Isa::Scalar;
}

Isa active_isa() noexcept { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) noexcept {
    active().store(supported(isa) ? isa : Isa::Scalar, std::memory_order_relaxed);
}

#if defined(RANKBENCH_HAVE_AVX2_KERNELS) && defined(RANKBENCH_HAVE_NEON_KERNELS)
#error "at most one SIMD family per build"
#endif

#if defined(RANKBENCH_HAVE_AVX2_KERNELS)
namespace simd = avx2;
constexpr Isa kSimdIsa = Isa::Avx2;
#elif defined(RANKBENCH_HAVE_NEON_KERNELS)
namespace simd = neon;
constexpr Isa kSimdIsa = Isa::Neon;
#endif

void label_edges(std::span<const double> forward, std::span<const double> reverse, double lo,
                 double hi, std::span<std::uint8_t> out) {
#if defined(RANKBENCH_HAVE_AVX2_KERNELS) || defined(RANKBENCH_HAVE_NEON_KERNELS)
    if (active_isa() == kSimdIsa) return simd::label_edges(forward, reverse, lo, hi, out);
#endif
    scalar::label_edges(forward, reverse, lo, hi, out);
}

std::size_t count_scaled_at_most(std::span<const double> values, double scale, double bound) {
#if defined(RANKBENCH_HAVE_AVX2_KERNELS) || defined(RANKBENCH_HAVE_NEON_KERNELS)
    if (active_isa() == kSimdIsa) return simd::count_scaled_at_most(values, scale, bound);
#endif
    return scalar::count_scaled_at_most(values, scale, bound);
}

bool or_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
#if defined(RANKBENCH_HAVE_AVX2_KERNELS) || defined(RANKBENCH_HAVE_NEON_KERNELS)
    if (active_isa() == kSimdIsa) return simd::or_into(dst, src);
#endif
    return scalar::or_into(dst, src);
}

}  // namespace rankbench::kernels

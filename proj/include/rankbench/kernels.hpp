#pragma once

// Data-parallel inner loops with a scalar reference and SIMD variants.
//
// Every variant performs the same per-element IEEE operations as the scalar
// reference (one multiply, one compare), so results are identical on every
// ISA. The variant is picked once at first use from the CPU's capabilities;
// RANKBENCH_KERNELS=scalar forces the reference path.

#include <cstddef>
#include <cstdint>
#include <span>

namespace rankbench::kernels {

enum class Isa : std::uint8_t { Scalar, Avx2, Neon };

const char* isa_name(Isa isa) noexcept;

/// Best variant supported by this CPU and build.
Isa detect_isa() noexcept;
/// Variant used by the dispatching entry points below.
Isa active_isa() noexcept;
/// Overrides the dispatch choice (tests, benchmarking). Falls back to Scalar
/// if `isa` is not supported.
void set_active_isa(Isa isa) noexcept;
bool supported(Isa isa) noexcept;

/// Labels pairs from cumulative win counts. For each edge with forward wins
/// a and reverse wins b (lo = 1 + 4 sqrt(kappa/q), hi = 1 + 32 kappa sqrt(kappa/q)):
///   GtStrong  a >= hi*b, a > 0      LtStrong  b >= hi*a, b > 0
///   GeqWeak   a >  lo*b             LeqWeak   b >  lo*a
///   ApproxEq  otherwise
/// checked in that order. Output codes are EdgeLabel values.
void label_edges(std::span<const double> forward, std::span<const double> reverse, double lo,
                 double hi, std::span<std::uint8_t> out);

/// Number of v in `values` with v * scale <= bound.
std::size_t count_scaled_at_most(std::span<const double> values, double scale, double bound);

/// dst |= src. Returns true if any bit of dst changed.
bool or_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src);

// Direct access to each variant, for equivalence tests.
namespace scalar {
void label_edges(std::span<const double> forward, std::span<const double> reverse, double lo,
                 double hi, std::span<std::uint8_t> out);
std::size_t count_scaled_at_most(std::span<const double> values, double scale, double bound);
bool or_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define RANKBENCH_HAVE_AVX2_KERNELS 1
namespace avx2 {
void label_edges(std::span<const double> forward, std::span<const double> reverse, double lo,
                 double hi, std::span<std::uint8_t> out);
std::size_t count_scaled_at_most(std::span<const double> values, double scale, double bound);
bool or_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src);
}  // namespace avx2
#endif

#if defined(__aarch64__)
#define RANKBENCH_HAVE_NEON_KERNELS 1
namespace neon {
void label_edges(std::span<const double> forward, std::span<const double> reverse, double lo,
                 double hi, std::span<std::uint8_t> out);
std::size_t count_scaled_at_most(std::span<const double> values, double scale, double bound);
bool or_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src);
}  // namespace neon
#endif

}  // namespace rankbench::kernels

#pragma once

// Counter-based random streams.
//
// Every oracle draw is a pure function of (master seed, stream id, draw index),
// so a sweep can be split across workers and still reproduce the sequential
// result bit for bit.

#include <cstdint>
#include <limits>

namespace rankbench {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) noexcept {
    return splitmix64(a ^ splitmix64(b + 0x632BE59BD9B4E019ULL));
}

/// 53-bit uniform in [0, 1).
constexpr double to_unit(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Identifies one independent sub-stream. Draw i of the stream is
/// `to_unit(hash(key, i))`.
struct StreamKey {
    std::uint64_t value = 0;

    static constexpr StreamKey derive(std::uint64_t seed, std::uint64_t stream) noexcept {
        return StreamKey{hash_combine(seed, stream)};
    }
    constexpr StreamKey child(std::uint64_t id) const noexcept {
        return StreamKey{hash_combine(value, id)};
    }
    constexpr std::uint64_t bits(std::uint64_t index) const noexcept {
        return splitmix64(value ^ splitmix64(index));
    }
    constexpr double uniform(std::uint64_t index) const noexcept { return to_unit(bits(index)); }
};

/// Sequential generator over a stream. Satisfies UniformRandomBitGenerator
/// but the helpers below are preferred: std distributions are not
/// reproducible across standard libraries.
class StreamRng {
public:
    using result_type = std::uint64_t;

    explicit StreamRng(StreamKey key) noexcept : key_(key) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return key_.bits(counter_++); }

    double uniform() noexcept { return to_unit((*this)()); }

    /// Unbiased integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) noexcept {
        // Lemire's multiply-shift with rejection.
        std::uint64_t x = (*this)();
        __uint128_t m = static_cast<__uint128_t>(x) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                x = (*this)();
                m = static_cast<__uint128_t>(x) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    std::uint64_t draws() const noexcept { return counter_; }

private:
    StreamKey key_;
    std::uint64_t counter_ = 0;
};

}  // namespace rankbench

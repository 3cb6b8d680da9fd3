#pragma once

#include <cstdint>
#include <string_view>

namespace rankbench {

/// Five-way confidence label of a compared pair (i, j), read from i's side.
enum class EdgeLabel : std::uint8_t {
    ApproxEq = 0,  ///< i ~ j
    GeqWeak = 1,   ///< i >= j
    GtStrong = 2,  ///< i > j
    LeqWeak = 3,   ///< i <= j
    LtStrong = 4,  ///< i < j
};

/// The same edge read from j's side.
constexpr EdgeLabel mirror(EdgeLabel label) noexcept {
    switch (label) {
        case EdgeLabel::GeqWeak: return EdgeLabel::LeqWeak;
        case EdgeLabel::GtStrong: return EdgeLabel::LtStrong;
        case EdgeLabel::LeqWeak: return EdgeLabel::GeqWeak;
        case EdgeLabel::LtStrong: return EdgeLabel::GtStrong;
        case EdgeLabel::ApproxEq: break;
    }
    return EdgeLabel::ApproxEq;
}

constexpr std::string_view to_string(EdgeLabel label) noexcept {
    switch (label) {
        case EdgeLabel::ApproxEq: return "~";
        case EdgeLabel::GeqWeak: return ">=";
        case EdgeLabel::GtStrong: return ">";
        case EdgeLabel::LeqWeak: return "<=";
        case EdgeLabel::LtStrong: return "<";
    }
    return "?";
}

}  // namespace rankbench

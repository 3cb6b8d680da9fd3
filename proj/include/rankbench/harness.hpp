#pragma once

// Running one seeded trial end to end, and fanning trials out over threads.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

#include "rankbench/core_model.hpp"
#include "rankbench/multiwise.hpp"

namespace rankbench {

enum class RunStatus : std::uint8_t { Completed, BudgetExhausted, InvariantBreach, Error };

const char* to_string(RunStatus status) noexcept;

struct RunOutcome {
    std::uint64_t seed = 0;
    RunStatus status = RunStatus::Completed;
    RunReport report;
    bool success = false;
    /// No trace row selected a bottom item or eliminated a top item.
    bool sound = true;
    double elapsed_ms = 0.0;
    std::string message;
};

/// Draws pi from `seed`, runs top_k and scores the answer against pi.
/// Never throws for algorithm failures; they are recorded in the outcome.
RunOutcome run_seed(const Instance& instance, const TopKConfig& config, std::uint64_t seed);

/// Calls body(i) for i in [0, count) on up to `threads` workers (0 = hardware
/// concurrency). Each index runs exactly once; completion order is arbitrary.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

}  // namespace rankbench

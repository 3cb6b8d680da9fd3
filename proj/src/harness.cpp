#include "rankbench/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rankbench {

const char* to_string(RunStatus status) noexcept {
    switch (status) {
        case RunStatus::Completed: return "completed";
        case RunStatus::BudgetExhausted: return "budget_exhausted";
        case RunStatus::InvariantBreach: return "invariant_breach";
        case RunStatus::Error: return "error";
    }
    return "unknown";
}

RunOutcome run_seed(const Instance& instance, const TopKConfig& config, std::uint64_t seed) {
    RunOutcome outcome;
    outcome.seed = seed;
    const auto start = std::chrono::steady_clock::now();
    const LabeledInstance truth = make_labeled(instance, seed);
    Environment env(truth);
    try {
        outcome.report = top_k(env, instance.k(), config);
        outcome.success = truth.is_correct(outcome.report.returned_labels);
        outcome.report.success = outcome.success;
    } catch (const BudgetExhausted& error) {
        outcome.status = RunStatus::BudgetExhausted;
        outcome.report = error.partial();
        outcome.message = error.what();
    } catch (const InvariantBreach& error) {
        outcome.status = RunStatus::InvariantBreach;
        outcome.message = error.what();
    } catch (const std::exception& error) {
        outcome.status = RunStatus::Error;
        outcome.message = error.what();
    }
    if (outcome.report.algorithm.empty()) {
        outcome.report.algorithm = to_string(resolve_algorithm(instance.n(), instance.l(), config));
    }
    outcome.report.queries_used = env.queries();
    outcome.sound = elimination_sound(outcome.report, truth);
    outcome.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return outcome;
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body) {
    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace rankbench

#pragma once

// JSON instance files: {"n", "k", "l", "theta" | "mu", "seed"}.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "rankbench/core_model.hpp"

namespace rankbench {

struct InstanceFile {
    Instance instance;
    std::optional<std::uint64_t> seed;
};

/// Parses an instance document. Unsorted theta is rejected, never sorted.
/// Errors are InvalidInstance with the offending field named.
InstanceFile parse_instance(const std::string& text);
InstanceFile read_instance(const std::filesystem::path& path);

std::string dump_instance(const Instance& instance, std::optional<std::uint64_t> seed = std::nullopt);
void write_instance(const std::filesystem::path& path, const Instance& instance,
                    std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace rankbench

#pragma once

#include "ofdma/model.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace ofdma {

/// Serving receiver of each subcarrier (zero-based).
struct Assignment {
    std::vector<std::size_t> serving_receiver;

    // Subcarriers served by receiver k, ascending.
    std::vector<std::size_t> subcarriers_of(std::size_t k) const;
    friend auto operator<=>(const Assignment&, const Assignment&) = default;
};

enum class SolveStatus { Optimal, Infeasible, IterLimit };

std::string_view to_string(SolveStatus status) noexcept;

struct SolveCounters {
    std::uint64_t comparisons = 0;    // ratio comparisons in the assignment scan
    std::uint64_t sorted_elements = 0;  // breakpoints sorted by water-filling
};

struct SolveReport {
    SolveStatus status = SolveStatus::Infeasible;
    double value = 0.0;
    Allocation allocation;
    Assignment assignment;
    std::uint64_t assignments_explored = 0;
    double elapsed_seconds = 0.0;
    SolveCounters counters;
};

} // namespace ofdma

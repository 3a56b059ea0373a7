#pragma once

#include "ofdma/model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace ofdma {

struct RandomInstanceSpec {
    std::size_t receivers = 1;
    std::size_t subcarriers = 1;
    std::uint64_t seed = 0;
    std::optional<double> budget;
    std::optional<std::vector<double>> targets;   // length 1 is broadcast to K
    std::optional<double> cap;                    // default 4 * budget / N, or 1 without a budget
};

/// Gains i.i.d. exponential with mean 1 (Rayleigh-fading power), unit noise,
/// equal caps. Deterministic in the seed (mt19937_64).
SystemInstance random_instance(const RandomInstanceSpec& spec);

struct BenchRow {
    std::size_t subcarriers = 0;
    std::size_t receivers = 0;
    double seconds = 0.0;         // best of the repeats
    std::uint64_t comparisons = 0;
    std::uint64_t sorted_elements = 0;
};

/// Times solve_sumrate on random instances with budget N and caps 4.
std::vector<BenchRow> bench_sumrate(const std::vector<std::size_t>& sizes, std::size_t receivers,
                                    std::uint64_t seed, unsigned repeats);

/// Least-squares slope of log(seconds) against log(N).
double loglog_slope(const std::vector<BenchRow>& rows);

} // namespace ofdma

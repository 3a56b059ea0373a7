#include "ofdma/generate.hpp"

#include "ofdma/sumrate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace ofdma {

SystemInstance random_instance(const RandomInstanceSpec& spec)
{
    if (spec.receivers == 0 || spec.subcarriers == 0)
        throw std::invalid_argument("receivers and subcarriers must be positive");

    const std::size_t K = spec.receivers;
    const std::size_t N = spec.subcarriers;
    SystemInstance inst;
    inst.num_receivers = K;
    inst.num_subcarriers = N;
    inst.gains = Matrix(K, N);
    inst.noises = Matrix(K, N, 1.0);

    std::mt19937_64 rng(spec.seed);
    std::exponential_distribution<double> fading(1.0);
    for (double& g : inst.gains.values())
        g = fading(rng);

    inst.total_budget = spec.budget;
    if (spec.targets) {
        if (spec.targets->size() == 1)
            inst.rate_targets = std::vector<double>(K, spec.targets->front());
        else
            inst.rate_targets = spec.targets;
    }
    const double cap = spec.cap ? *spec.cap : spec.budget ? 4.0 * *spec.budget / static_cast<double>(N) : 1.0;
    inst.subcarrier_caps.assign(N, cap);
    return inst;
}

std::vector<BenchRow> bench_sumrate(const std::vector<std::size_t>& sizes, std::size_t receivers,
                                    std::uint64_t seed, unsigned repeats)
{
    std::vector<BenchRow> rows;
    for (std::size_t N : sizes) {
        RandomInstanceSpec spec;
        spec.receivers = receivers;
        spec.subcarriers = N;
        spec.seed = seed + N;
        spec.budget = static_cast<double>(N);
        spec.cap = 4.0;
        const SystemInstance inst = random_instance(spec);

        BenchRow row;
        row.subcarriers = N;
        row.receivers = receivers;
        row.seconds = INFINITY;
        for (unsigned r = 0; r < std::max(1u, repeats); ++r) {
            const SolveReport report = solve_sumrate(inst);
            row.seconds = std::min(row.seconds, report.elapsed_seconds);
            row.comparisons = report.counters.comparisons;
            row.sorted_elements = report.counters.sorted_elements;
        }
        rows.push_back(row);
    }
    return rows;
}

double loglog_slope(const std::vector<BenchRow>& rows)
{
    if (rows.size() < 2)
        return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(rows.size());
    for (const auto& r : rows) {
        const double x = std::log(static_cast<double>(r.subcarriers));
        const double y = std::log(r.seconds);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace ofdma

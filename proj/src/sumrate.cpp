#include "ofdma/sumrate.hpp"

#include "ofdma/waterfill.hpp"

#include <chrono>

namespace ofdma {

Assignment best_receiver_assignment(const SystemInstance& instance, SolveCounters* counters)
{
    const std::size_t K = instance.num_receivers;
    const std::size_t N = instance.num_subcarriers;
    Assignment assignment;
    assignment.serving_receiver.assign(N, 0);
    if (K == 0)
        return assignment;

    // Row-major sweep keeps the scan cache-friendly for large N.
    std::vector<double> best(N);
    const auto g0 = instance.gains.row(0);
    const auto e0 = instance.noises.row(0);
    for (std::size_t n = 0; n < N; ++n)
        best[n] = g0[n] / e0[n];
    for (std::size_t k = 1; k < K; ++k) {
        const auto g = instance.gains.row(k);
        const auto e = instance.noises.row(k);
        for (std::size_t n = 0; n < N; ++n) {
            const double ratio = g[n] / e[n];
            if (ratio > best[n]) {
                best[n] = ratio;
                assignment.serving_receiver[n] = k;
            }
        }
    }
    if (counters)
        counters->comparisons += static_cast<std::uint64_t>(K - 1) * N;
    return assignment;
}

SolveReport solve_sumrate(const SystemInstance& instance)
{
    require_valid(instance, Problem::MaxUtility);
    const auto start = std::chrono::steady_clock::now();

    SolveReport report;
    report.assignment = best_receiver_assignment(instance, &report.counters);

    const std::size_t K = instance.num_receivers;
    const std::size_t N = instance.num_subcarriers;
    ChannelVector channel;
    channel.gains.resize(N);
    channel.caps = instance.subcarrier_caps;
    for (std::size_t n = 0; n < N; ++n)
        channel.gains[n] = instance.snr_slope(report.assignment.serving_receiver[n], n);

    const WaterfillResult wf = waterfill_capped(channel, *instance.total_budget, &report.counters);

    report.allocation = Allocation(K, N);
    for (std::size_t n = 0; n < N; ++n)
        report.allocation.powers(report.assignment.serving_receiver[n], n) = wf.powers[n];

    report.status = SolveStatus::Optimal;
    report.value = wf.value / static_cast<double>(K);
    report.assignments_explored = 1;
    report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

} // namespace ofdma

#pragma once

#include <span>
#include <variant>
#include <vector>

namespace ofdma {

struct SolveCounters;

/// Parallel channels seen by one transmitter-receiver pair: gains[m] is the
/// SNR per watt (gain over noise) and caps[m] the per-channel power cap.
struct ChannelVector {
    std::vector<double> gains;
    std::vector<double> caps;

    std::size_t size() const noexcept { return gains.size(); }
    // Throws std::invalid_argument on length mismatch, negative gain or nonpositive cap.
    void validate() const;
    // Rate in bits with every channel at its cap.
    double max_rate() const;
};

/// Powers follow powers[m] = clamp(water_level - 1/gains[m], 0, caps[m]),
/// with zero power on zero-gain channels.
struct WaterfillResult {
    std::vector<double> powers;
    double water_level = 0.0;
    double value = 0.0;        // achieved rate, bits
    double total_power = 0.0;
};

/// The rate target exceeds what the channels can carry at full caps.
struct Infeasible {
    double max_rate = 0.0;
};

/// Maximizes sum_m log2(1 + g_m p_m) subject to sum_m p_m <= budget and
/// 0 <= p_m <= caps_m. O(M log M): sorts the 2M breakpoints and locates the
/// level on the piecewise-linear power curve by interpolation.
WaterfillResult waterfill_capped(const ChannelVector& channel, double budget, SolveCounters* counters = nullptr);

/// Minimizes sum_m p_m subject to sum_m log2(1 + g_m p_m) >= target_rate
/// and 0 <= p_m <= caps_m. The achieved rate lies in [target, target + 1e-10].
std::variant<WaterfillResult, Infeasible> inverse_waterfill_capped(const ChannelVector& channel, double target_rate);

/// Euclidean projection of `point` onto {0 <= p <= caps, sum p <= budget}.
std::vector<double> project_capped_simplex(std::span<const double> point, std::span<const double> caps,
                                           double budget);

} // namespace ofdma

#include "ofdma/waterfill.hpp"

#include "ofdma/model.hpp"
#include "ofdma/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ofdma {

namespace {

double clamp_power(double level, double offset, double cap) noexcept
{
    return std::clamp(level - offset, 0.0, cap);
}

// Filled amount sum_m clamp(level - offsets[m], 0, caps[m]) and the number of
// channels strictly inside their clamp range.
struct Fill {
    double total = 0.0;
    std::size_t free = 0;
};

Fill fill_at(double level, std::span<const double> offsets, std::span<const double> caps)
{
    CompensatedSum sum;
    std::size_t free = 0;
    for (std::size_t m = 0; m < offsets.size(); ++m) {
        const double p = clamp_power(level, offsets[m], caps[m]);
        sum.add(p);
        if (p > 0.0 && p < caps[m])
            ++free;
    }
    return {sum.value(), free};
}

// Level L with sum_m clamp(L - offsets[m], 0, caps[m]) == target, for
// 0 < target < sum(caps). The returned level never overfills: fill(L) <= target.
double level_for_total(std::span<const double> offsets, std::span<const double> caps, double target,
                       SolveCounters* counters)
{
    struct Event {
        double position;
        int slope_change;
    };
    std::vector<Event> events;
    events.reserve(2 * offsets.size());
    for (std::size_t m = 0; m < offsets.size(); ++m) {
        events.push_back({offsets[m], +1});
        events.push_back({offsets[m] + caps[m], -1});
    }
    std::sort(events.begin(), events.end(),
              [](const Event& a, const Event& b) { return a.position < b.position; });
    if (counters)
        counters->sorted_elements += events.size();

    double level = events.back().position;
    double filled = 0.0;
    long slope = 0;
    double x = events.front().position;
    for (const Event& e : events) {
        const double next = filled + static_cast<double>(slope) * (e.position - x);
        if (slope > 0 && next >= target) {
            level = x + (target - filled) / static_cast<double>(slope);
            break;
        }
        filled = next;
        x = e.position;
        slope += e.slope_change;
    }

    // Newton polish on the exact piecewise-linear fill, then step down until
    // the budget is not exceeded.
    for (int it = 0; it < 3; ++it) {
        const Fill f = fill_at(level, offsets, caps);
        if (f.free == 0 || f.total == target)
            break;
        level += (target - f.total) / static_cast<double>(f.free);
    }
    for (int it = 0; it < 200; ++it) {
        const Fill f = fill_at(level, offsets, caps);
        if (f.total <= target)
            break;
        const double excess = f.total - target;
        const double step = std::max(excess / static_cast<double>(std::max<std::size_t>(f.free, 1)),
                                     std::fabs(level) * std::numeric_limits<double>::epsilon());
        level -= step;
    }
    return level;
}

} // namespace

void ChannelVector::validate() const
{
    if (gains.size() != caps.size())
        throw std::invalid_argument("channel gains and caps differ in length");
    for (double g : gains)
        if (!(g >= 0.0) || std::isinf(g))
            throw std::invalid_argument("channel gain must be nonnegative and finite");
    for (double c : caps)
        if (!(c > 0.0) || std::isinf(c))
            throw std::invalid_argument("channel cap must be positive and finite");
}

double ChannelVector::max_rate() const
{
    CompensatedSum sum;
    for (std::size_t m = 0; m < gains.size(); ++m)
        sum.add(rate_bits(gains[m] * caps[m]));
    return sum.value();
}

WaterfillResult waterfill_capped(const ChannelVector& channel, double budget, SolveCounters* counters)
{
    channel.validate();
    if (!(budget > 0.0) || std::isinf(budget))
        throw std::invalid_argument("water-filling budget must be positive and finite");

    const std::size_t M = channel.size();
    WaterfillResult result;
    result.powers.assign(M, 0.0);

    std::vector<std::size_t> active;
    std::vector<double> offsets;
    std::vector<double> caps;
    CompensatedSum cap_sum;
    double full_level = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
        if (channel.gains[m] > 0.0) {
            active.push_back(m);
            offsets.push_back(1.0 / channel.gains[m]);
            caps.push_back(channel.caps[m]);
            cap_sum.add(channel.caps[m]);
            full_level = std::max(full_level, offsets.back() + caps.back());
        }
    }
    if (active.empty())
        return result;

    if (cap_sum.value() <= budget) {
        for (std::size_t i = 0; i < active.size(); ++i)
            result.powers[active[i]] = caps[i];
        result.water_level = full_level;
    } else {
        const double level = level_for_total(offsets, caps, budget, counters);
        for (std::size_t i = 0; i < active.size(); ++i)
            result.powers[active[i]] = clamp_power(level, offsets[i], caps[i]);
        result.water_level = level;
    }

    CompensatedSum power;
    CompensatedSum rate;
    for (std::size_t m = 0; m < M; ++m) {
        power.add(result.powers[m]);
        rate.add(rate_bits(channel.gains[m] * result.powers[m]));
    }
    result.total_power = power.value();
    result.value = rate.value();
    return result;
}

std::variant<WaterfillResult, Infeasible> inverse_waterfill_capped(const ChannelVector& channel, double target_rate)
{
    channel.validate();
    if (!(target_rate > 0.0) || std::isinf(target_rate))
        throw std::invalid_argument("rate target must be positive and finite");

    const double max_rate = channel.max_rate();
    if (max_rate < target_rate)
        return Infeasible{max_rate};

    const std::size_t M = channel.size();
    std::vector<std::size_t> active;
    std::vector<double> offsets;
    std::vector<double> caps;
    std::vector<double> log_gains;
    for (std::size_t m = 0; m < M; ++m) {
        if (channel.gains[m] > 0.0) {
            active.push_back(m);
            offsets.push_back(1.0 / channel.gains[m]);
            caps.push_back(channel.caps[m]);
            log_gains.push_back(std::log2(channel.gains[m]));
        }
    }

    auto rate_at = [&](double level) {
        CompensatedSum sum;
        for (std::size_t i = 0; i < active.size(); ++i)
            sum.add(rate_bits(channel.gains[active[i]] * clamp_power(level, offsets[i], caps[i])));
        return sum.value();
    };

    std::vector<double> breakpoints;
    breakpoints.reserve(2 * active.size());
    for (std::size_t i = 0; i < active.size(); ++i) {
        breakpoints.push_back(offsets[i]);
        breakpoints.push_back(offsets[i] + caps[i]);
    }
    std::sort(breakpoints.begin(), breakpoints.end());

    double level = breakpoints.back();
    if (max_rate > target_rate) {
        // First breakpoint whose rate reaches the target; rate is monotone in the level.
        const auto hit = std::partition_point(breakpoints.begin(), breakpoints.end(),
                                              [&](double x) { return rate_at(x) < target_rate; });
        const double upper = hit == breakpoints.end() ? breakpoints.back() : *hit;
        const double lower = hit == breakpoints.begin() ? upper : *std::prev(hit);
        // On (lower, upper) the rate is constant + free * log2(level).
        const double probe = 0.5 * (lower + upper);
        CompensatedSum fixed;
        std::size_t free = 0;
        for (std::size_t i = 0; i < active.size(); ++i) {
            const double p = clamp_power(probe, offsets[i], caps[i]);
            if (p >= caps[i]) {
                fixed.add(rate_bits(channel.gains[active[i]] * caps[i]));
            } else if (p > 0.0) {
                fixed.add(log_gains[i]);
                ++free;
            }
        }
        if (free > 0)
            level = std::exp2((target_rate - fixed.value()) / static_cast<double>(free));
        level = std::clamp(level, lower, upper);

        // Raise the level until the target is met.
        for (int it = 0; it < 200; ++it) {
            const double r = rate_at(level);
            if (r >= target_rate)
                break;
            std::size_t n_free = 0;
            for (std::size_t i = 0; i < active.size(); ++i) {
                const double p = clamp_power(level, offsets[i], caps[i]);
                if (p > 0.0 && p < caps[i])
                    ++n_free;
            }
            const double newton = (target_rate - r) * level * std::numbers::ln2
                                  / static_cast<double>(std::max<std::size_t>(n_free, 1));
            level += std::max(newton, std::fabs(level) * std::numeric_limits<double>::epsilon());
        }
    }

    WaterfillResult result;
    result.powers.assign(M, 0.0);
    for (std::size_t i = 0; i < active.size(); ++i)
        result.powers[active[i]] = clamp_power(level, offsets[i], caps[i]);
    result.water_level = level;
    CompensatedSum power;
    CompensatedSum rate;
    for (std::size_t m = 0; m < M; ++m) {
        power.add(result.powers[m]);
        rate.add(rate_bits(channel.gains[m] * result.powers[m]));
    }
    result.total_power = power.value();
    result.value = rate.value();
    return result;
}

std::vector<double> project_capped_simplex(std::span<const double> point, std::span<const double> caps,
                                           double budget)
{
    if (point.size() != caps.size())
        throw std::invalid_argument("projection point and caps differ in length");
    const std::size_t M = point.size();
    std::vector<double> out(M);
    CompensatedSum sum;
    for (std::size_t m = 0; m < M; ++m) {
        out[m] = std::clamp(point[m], 0.0, caps[m]);
        sum.add(out[m]);
    }
    if (sum.value() <= budget)
        return out;

    // out[m] = clamp(point[m] - shift, 0, caps[m]); with level = -shift the
    // offsets are -point[m].
    std::vector<double> offsets(M);
    for (std::size_t m = 0; m < M; ++m)
        offsets[m] = -point[m];
    const double level = level_for_total(offsets, caps, budget, nullptr);
    for (std::size_t m = 0; m < M; ++m)
        out[m] = clamp_power(level, offsets[m], caps[m]);
    return out;
}

} // namespace ofdma

#include "ofdma/exact.hpp"

#include "ofdma/hungarian.hpp"
#include "ofdma/waterfill.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

namespace ofdma {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kInf = std::numeric_limits<double>::infinity();

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_enumeration_limit(std::size_t K, std::size_t N, std::uint64_t limit)
{
    std::uint64_t count = 1;
    for (std::size_t n = 0; n < N; ++n) {
        if (count > limit / K) {
            std::ostringstream os;
            os << "enumeration of " << K << "^" << N << " assignments exceeds the limit of " << limit
               << "; use the matching solver (N == K) or the two-stage solver (sum rate)";
            throw LimitExceeded(os.str());
        }
        count *= K;
    }
    if (count > limit) {
        std::ostringstream os;
        os << "enumeration of " << count << " assignments exceeds the limit of " << limit;
        throw LimitExceeded(os.str());
    }
}

// Subcarriers of each receiver under `serving`, ascending.
std::vector<std::vector<std::size_t>> groups_of(std::span<const std::size_t> serving, std::size_t K)
{
    std::vector<std::vector<std::size_t>> groups(K);
    for (std::size_t n = 0; n < serving.size(); ++n)
        groups[serving[n]].push_back(n);
    return groups;
}

ChannelVector channel_for(const SystemInstance& instance, std::size_t k, std::span<const std::size_t> subcarriers)
{
    ChannelVector channel;
    channel.gains.reserve(subcarriers.size());
    channel.caps.reserve(subcarriers.size());
    for (std::size_t n : subcarriers) {
        channel.gains.push_back(instance.snr_slope(k, n));
        channel.caps.push_back(instance.subcarrier_caps[n]);
    }
    return channel;
}

struct LeafOutcome {
    bool feasible = false;
    double score = 0.0;   // lower is better
    bool converged = true;
};

// (score, assignment) in lexicographic order decides the winner, which makes
// the merge of per-worker results associative and schedule-independent.
struct Candidate {
    bool found = false;
    double score = kInf;
    std::vector<std::size_t> assignment;
    bool converged = true;

    bool beats(const Candidate& other) const
    {
        if (!found)
            return false;
        if (!other.found)
            return true;
        if (score != other.score)
            return score < other.score;
        return assignment < other.assignment;
    }
};

struct SearchResult {
    Candidate best;
    std::uint64_t explored = 0;
};

using LeafFn = std::function<LeafOutcome(std::span<const std::size_t>)>;

// Prunes partial assignments once some receiver cannot reach its target
// even with every still-unassigned subcarrier at its cap.
class TargetPruner {
public:
    TargetPruner(const SystemInstance& instance)
        : K_(instance.num_receivers), N_(instance.num_subcarriers), targets_(*instance.rate_targets),
          contribution_(K_, N_), suffix_(K_, N_ + 1)
    {
        for (std::size_t k = 0; k < K_; ++k) {
            for (std::size_t n = 0; n < N_; ++n)
                contribution_(k, n) = rate_bits(instance.snr_slope(k, n) * instance.subcarrier_caps[n]);
            for (std::size_t n = N_; n-- > 0;)
                suffix_(k, n) = suffix_(k, n + 1) + contribution_(k, n);
        }
    }

    double contribution(std::size_t k, std::size_t n) const { return contribution_(k, n); }

    // `assigned` holds the cap-rate of subcarriers [0, depth) per receiver.
    bool viable(std::span<const double> assigned, std::size_t depth) const
    {
        for (std::size_t k = 0; k < K_; ++k) {
            const double reachable = assigned[k] + suffix_(k, depth);
            // slack keeps boundary cases (reachable == target) for the leaf check
            if (reachable < targets_[k] * (1.0 - 1e-12) - 1e-12)
                return false;
        }
        return true;
    }

private:
    std::size_t K_;
    std::size_t N_;
    std::vector<double> targets_;
    Matrix contribution_;
    Matrix suffix_;
};

class AssignmentSearch {
public:
    AssignmentSearch(std::size_t K, std::size_t N, LeafFn leaf, const TargetPruner* pruner)
        : K_(K), N_(N), leaf_(std::move(leaf)), pruner_(pruner)
    {
    }

    SearchResult run(unsigned threads) const
    {
        threads = std::max(1u, threads);
        if (threads == 1) {
            SearchResult result;
            std::vector<std::size_t> a(N_, 0);
            std::vector<double> assigned(K_, 0.0);
            dfs(0, a, assigned, result);
            return result;
        }

        // Fan out over assignment prefixes; worker w takes prefixes w, w+T, ...
        std::size_t depth = 0;
        std::uint64_t prefixes = 1;
        while (depth < N_ && prefixes < 8ull * threads) {
            prefixes *= K_;
            ++depth;
        }
        std::vector<SearchResult> partial(threads);
        std::vector<std::thread> workers;
        for (unsigned w = 0; w < threads; ++w) {
            workers.emplace_back([&, w] {
                std::vector<std::size_t> a(N_, 0);
                std::vector<double> assigned(K_);
                for (std::uint64_t id = w; id < prefixes; id += threads) {
                    std::uint64_t rest = id;
                    for (std::size_t n = depth; n-- > 0;) {
                        a[n] = static_cast<std::size_t>(rest % K_);
                        rest /= K_;
                    }
                    std::fill(assigned.begin(), assigned.end(), 0.0);
                    if (pruner_) {
                        for (std::size_t n = 0; n < depth; ++n)
                            assigned[a[n]] += pruner_->contribution(a[n], n);
                        if (!pruner_->viable(assigned, depth))
                            continue;
                    }
                    dfs(depth, a, assigned, partial[w]);
                }
            });
        }
        for (auto& t : workers)
            t.join();

        SearchResult merged;
        for (auto& p : partial) {
            merged.explored += p.explored;
            if (p.best.beats(merged.best))
                merged.best = std::move(p.best);
        }
        return merged;
    }

private:
    void dfs(std::size_t n, std::vector<std::size_t>& a, std::vector<double>& assigned, SearchResult& out) const
    {
        if (n == N_) {
            ++out.explored;
            const LeafOutcome o = leaf_(a);
            if (!o.feasible)
                return;
            Candidate c{true, o.score, {}, o.converged};
            if (!out.best.found || c.score < out.best.score) {
                // lexicographic traversal: the first of equal scores stays
                c.assignment = a;
                out.best = std::move(c);
            }
            return;
        }
        for (std::size_t k = 0; k < K_; ++k) {
            a[n] = k;
            if (pruner_) {
                const double saved = assigned[k];
                assigned[k] = saved + pruner_->contribution(k, n);
                if (pruner_->viable(assigned, n + 1))
                    dfs(n + 1, a, assigned, out);
                assigned[k] = saved;
            } else {
                dfs(n + 1, a, assigned, out);
            }
        }
    }

    std::size_t K_;
    std::size_t N_;
    LeafFn leaf_;
    const TargetPruner* pruner_;
};

// Minimum power for a fixed assignment; infinite when some receiver cannot
// reach its target.
double assignment_min_power(const SystemInstance& instance, std::span<const std::size_t> serving,
                            Allocation* out)
{
    const std::size_t K = instance.num_receivers;
    const auto groups = groups_of(serving, K);
    CompensatedSum total;
    for (std::size_t k = 0; k < K; ++k) {
        if (groups[k].empty())
            return kInf;
        const auto solved = inverse_waterfill_capped(channel_for(instance, k, groups[k]), (*instance.rate_targets)[k]);
        const auto* wf = std::get_if<WaterfillResult>(&solved);
        if (!wf)
            return kInf;
        total.add(wf->total_power);
        if (out)
            for (std::size_t i = 0; i < groups[k].size(); ++i)
                out->powers(k, groups[k][i]) = wf->powers[i];
    }
    return total.value();
}

double assignment_sum_rate(const SystemInstance& instance, std::span<const std::size_t> serving, Allocation* out)
{
    ChannelVector channel;
    channel.gains.resize(serving.size());
    channel.caps = instance.subcarrier_caps;
    for (std::size_t n = 0; n < serving.size(); ++n)
        channel.gains[n] = instance.snr_slope(serving[n], n);
    const WaterfillResult wf = waterfill_capped(channel, *instance.total_budget);
    if (out)
        for (std::size_t n = 0; n < serving.size(); ++n)
            out->powers(serving[n], n) = wf.powers[n];
    return wf.value / static_cast<double>(instance.num_receivers);
}

struct AscentResult {
    double value = 0.0;
    bool converged = true;
};

// Projected gradient ascent of H2 (as the mean log-rate) or H3 over the
// powers of a fixed assignment. Concave objective, so a stationary point is
// the optimum for that assignment.
AscentResult fair_utility_ascent(const SystemInstance& instance, std::span<const std::size_t> serving,
                                 Utility kind, const ExactOptions& options, Allocation* out)
{
    const std::size_t K = instance.num_receivers;
    const double Kd = static_cast<double>(K);
    const double budget = *instance.total_budget;

    std::vector<std::size_t> var_subcarrier;
    std::vector<std::size_t> owner;
    std::vector<double> slope;
    std::vector<double> caps;
    std::vector<char> has_var(K, false);
    for (std::size_t n = 0; n < serving.size(); ++n) {
        const double s = instance.snr_slope(serving[n], n);
        if (s > 0.0) {
            var_subcarrier.push_back(n);
            owner.push_back(serving[n]);
            slope.push_back(s);
            caps.push_back(instance.subcarrier_caps[n]);
            has_var[serving[n]] = true;
        }
    }
    if (std::find(has_var.begin(), has_var.end(), false) != has_var.end())
        return {0.0, true};

    const std::size_t M = slope.size();
    std::vector<double> rates(K);
    auto compute = [&](const std::vector<double>& p) {
        std::fill(rates.begin(), rates.end(), 0.0);
        for (std::size_t i = 0; i < M; ++i)
            rates[owner[i]] += rate_bits(slope[i] * p[i]);
    };
    auto objective = [&](const std::vector<double>& p) {
        compute(p);
        double acc = 0.0;
        for (double r : rates) {
            if (!(r > 0.0))
                return -kInf;
            acc += kind == Utility::H2 ? std::log(r) : 1.0 / r;
        }
        return kind == Utility::H2 ? acc / Kd : Kd / acc;
    };
    auto gradient = [&](const std::vector<double>& p, std::vector<double>& g) {
        compute(p);
        std::vector<double> outer(K);
        if (kind == Utility::H2) {
            for (std::size_t k = 0; k < K; ++k)
                outer[k] = 1.0 / (Kd * rates[k]);
        } else {
            double inv_sum = 0.0;
            for (double r : rates)
                inv_sum += 1.0 / r;
            for (std::size_t k = 0; k < K; ++k)
                outer[k] = Kd / (inv_sum * inv_sum * rates[k] * rates[k]);
        }
        for (std::size_t i = 0; i < M; ++i)
            g[i] = outer[owner[i]] * slope[i] / ((1.0 + slope[i] * p[i]) * std::numbers::ln2);
    };
    auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            s += a[i] * b[i];
        return s;
    };

    std::vector<double> p(M);
    for (std::size_t i = 0; i < M; ++i)
        p[i] = std::min(caps[i], budget / static_cast<double>(M));

    std::vector<double> g(M), g_next(M), shifted(M), trial(M), step(M), diff(M);
    double f = objective(p);
    gradient(p, g);
    double alpha = 1.0;
    bool converged = false;
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
        for (std::size_t i = 0; i < M; ++i)
            shifted[i] = p[i] + g[i];
        const auto unit = project_capped_simplex(shifted, caps, budget);
        double pg_norm = 0.0;
        for (std::size_t i = 0; i < M; ++i)
            pg_norm += (unit[i] - p[i]) * (unit[i] - p[i]);
        if (std::sqrt(pg_norm) < options.gradient_tol) {
            converged = true;
            break;
        }

        bool accepted = false;
        double f_trial = f;
        for (int halving = 0; halving < 80; ++halving) {
            for (std::size_t i = 0; i < M; ++i)
                shifted[i] = p[i] + alpha * g[i];
            trial = project_capped_simplex(shifted, caps, budget);
            for (std::size_t i = 0; i < M; ++i)
                step[i] = trial[i] - p[i];
            f_trial = objective(trial);
            if (f_trial >= f + 1e-4 * dot(g, step)) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            // no ascent left at working precision
            converged = true;
            break;
        }

        gradient(trial, g_next);
        for (std::size_t i = 0; i < M; ++i)
            diff[i] = g_next[i] - g[i];
        const double ss = dot(step, step);
        const double sy = dot(step, diff);
        alpha = sy < 0.0 ? ss / -sy : alpha * 2.0;
        alpha = std::clamp(alpha, 1e-12, 1e12);

        p = trial;
        f = f_trial;
        std::swap(g, g_next);
    }

    compute(p);
    if (out)
        for (std::size_t i = 0; i < M; ++i)
            out->powers(owner[i], var_subcarrier[i]) = p[i];
    return {utility(rates, kind), converged};
}

} // namespace

MinRateResult minrate_max_bisection(const SystemInstance& instance, const Assignment& assignment, double tol)
{
    const std::size_t K = instance.num_receivers;
    const std::size_t N = instance.num_subcarriers;
    if (!instance.total_budget)
        throw ValidationError({"total_budget required"});
    if (assignment.serving_receiver.size() != N)
        throw DimensionError("assignment length differs from the number of subcarriers");
    for (std::size_t k : assignment.serving_receiver)
        if (k >= K)
            throw DimensionError("assignment names a receiver outside the instance");

    MinRateResult result{0.0, Allocation(K, N)};
    const auto groups = groups_of(assignment.serving_receiver, K);
    std::vector<ChannelVector> channels;
    double upper = kInf;
    for (std::size_t k = 0; k < K; ++k) {
        if (groups[k].empty())
            return result;
        channels.push_back(channel_for(instance, k, groups[k]));
        upper = std::min(upper, channels.back().max_rate());
    }
    if (!(upper > 0.0))
        return result;

    const double budget = *instance.total_budget;
    // Total power to give every receiver rate t; infinite if unreachable.
    auto power_for = [&](double t, Allocation* out) {
        CompensatedSum total;
        for (std::size_t k = 0; k < K; ++k) {
            const auto solved = inverse_waterfill_capped(channels[k], t);
            const auto* wf = std::get_if<WaterfillResult>(&solved);
            if (!wf)
                return kInf;
            total.add(wf->total_power);
            if (out)
                for (std::size_t i = 0; i < groups[k].size(); ++i)
                    out->powers(k, groups[k][i]) = wf->powers[i];
        }
        return total.value();
    };

    double lo = 0.0;
    double hi = upper;
    if (power_for(hi, nullptr) <= budget) {
        lo = hi;
    } else {
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi)
                break;
            (power_for(mid, nullptr) <= budget ? lo : hi) = mid;
        }
    }
    result.t_star = lo;
    if (lo > 0.0)
        power_for(lo, &result.allocation);
    return result;
}

SolveReport exact_min_total_power(const SystemInstance& instance, const ExactOptions& options)
{
    require_valid(instance, Problem::MinPower);
    const std::size_t K = instance.num_receivers;
    const std::size_t N = instance.num_subcarriers;
    check_enumeration_limit(K, N, options.enumeration_limit);
    const auto start = Clock::now();

    const TargetPruner pruner(instance);
    const AssignmentSearch search(
        K, N,
        [&](std::span<const std::size_t> a) {
            const double power = assignment_min_power(instance, a, nullptr);
            return LeafOutcome{std::isfinite(power), power, true};
        },
        &pruner);
    SearchResult found = search.run(options.threads);

    SolveReport report;
    report.assignments_explored = found.explored;
    report.allocation = Allocation(K, N);
    if (!found.best.found) {
        report.status = SolveStatus::Infeasible;
        report.value = kInf;
    } else {
        report.status = SolveStatus::Optimal;
        report.assignment.serving_receiver = found.best.assignment;
        report.value = assignment_min_power(instance, found.best.assignment, &report.allocation);
    }
    report.elapsed_seconds = seconds_since(start);
    return report;
}

SolveReport exact_max_utility(const SystemInstance& instance, Utility kind, const ExactOptions& options)
{
    require_valid(instance, Problem::MaxUtility);
    const std::size_t K = instance.num_receivers;
    const std::size_t N = instance.num_subcarriers;
    check_enumeration_limit(K, N, options.enumeration_limit);
    const auto start = Clock::now();

    auto evaluate = [&](std::span<const std::size_t> a, Allocation* out) -> AscentResult {
        switch (kind) {
        case Utility::H1:
            return {assignment_sum_rate(instance, a, out), true};
        case Utility::H4: {
            Assignment assignment{{a.begin(), a.end()}};
            auto mr = minrate_max_bisection(instance, assignment, options.bisection_tol);
            if (out)
                *out = std::move(mr.allocation);
            return {mr.t_star, true};
        }
        case Utility::H2:
        case Utility::H3:
            return fair_utility_ascent(instance, a, kind, options, out);
        }
        return {};
    };

    const AssignmentSearch search(
        K, N,
        [&](std::span<const std::size_t> a) {
            const AscentResult r = evaluate(a, nullptr);
            return LeafOutcome{true, -r.value, r.converged};
        },
        nullptr);
    SearchResult found = search.run(options.threads);

    SolveReport report;
    report.assignments_explored = found.explored;
    report.assignment.serving_receiver = found.best.assignment;
    report.allocation = Allocation(K, N);
    const AscentResult best = evaluate(found.best.assignment, &report.allocation);
    report.value = best.value;
    report.status = found.best.converged ? SolveStatus::Optimal : SolveStatus::IterLimit;
    report.elapsed_seconds = seconds_since(start);
    return report;
}

SolveReport min_power_matching(const SystemInstance& instance)
{
    require_valid(instance, Problem::MinPower);
    const std::size_t K = instance.num_receivers;
    const std::size_t N = instance.num_subcarriers;
    if (N != K) {
        std::ostringstream os;
        os << "matching solver requires as many subcarriers as receivers (K=" << K << ", N=" << N << ")";
        throw PreconditionError(os.str());
    }
    const auto start = Clock::now();
    const auto& targets = *instance.rate_targets;

    std::vector<std::vector<double>> cost(K, std::vector<double>(N, kInf));
    double max_finite = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        const double snr_needed = std::expm1(targets[k] * std::numbers::ln2);
        for (std::size_t n = 0; n < N; ++n) {
            const double slope = instance.snr_slope(k, n);
            if (!(slope > 0.0))
                continue;
            double power = snr_needed / slope;
            while (rate_bits(slope * power) < targets[k])
                power = std::nextafter(power, kInf);
            if (power > instance.subcarrier_caps[n])
                continue;
            cost[k][n] = power;
            max_finite = std::max(max_finite, power);
        }
    }

    // Any perfect matching over finite entries costs at most K * max_finite.
    const double sentinel = static_cast<double>(K) * max_finite + 1.0;
    std::vector<std::vector<double>> padded = cost;
    for (auto& row : padded)
        for (double& c : row)
            if (std::isinf(c))
                c = sentinel;
    const auto column = hungarian_min_cost(padded);

    SolveReport report;
    report.assignments_explored = 1;
    report.allocation = Allocation(K, N);
    bool feasible = true;
    for (std::size_t k = 0; k < K; ++k)
        if (std::isinf(cost[k][column[k]]))
            feasible = false;
    if (!feasible) {
        report.status = SolveStatus::Infeasible;
        report.value = kInf;
    } else {
        report.status = SolveStatus::Optimal;
        report.assignment.serving_receiver.assign(N, 0);
        CompensatedSum total;
        for (std::size_t k = 0; k < K; ++k) {
            report.allocation.powers(k, column[k]) = cost[k][column[k]];
            report.assignment.serving_receiver[column[k]] = k;
            total.add(cost[k][column[k]]);
        }
        report.value = total.value();
    }
    report.elapsed_seconds = seconds_since(start);
    return report;
}

} // namespace ofdma

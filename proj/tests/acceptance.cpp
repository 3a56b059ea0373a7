// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "ofdma/exact.hpp"
#include "ofdma/generate.hpp"
#include "ofdma/reduction.hpp"
#include "ofdma/sumrate.hpp"
#include "ofdma/waterfill.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace ofdma;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

double rel_gap(double a, double b)
{
    return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

std::string fmt(const char* f, auto... args)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome two_stage_optimality()
{
    std::mt19937_64 rng(1001);
    std::uniform_real_distribution<double> budget(0.05, 10.0);
    int n = 0, bad = 0;
    double worst = 0.0;
    for (; n < 1200; ++n) {
        const std::size_t K = 1 + n % 3;
        const std::size_t N = K + rng() % (7 - K);
        auto inst = oracle::random_instance(rng, K, N);
        inst.total_budget = budget(rng);
        const double got = solve_sumrate(inst).value;
        const double want = oracle::brute_force_sumrate(inst);
        const double gap = rel_gap(got, want);
        worst = std::max(worst, gap);
        bad += gap > 1e-9;
    }
    return {bad == 0, fmt("%d instances, %d mismatches, worst rel gap %.3g (tol 1e-9)", n, bad, worst)};
}

std::vector<ThreePartitionInstance> partition_corpus()
{
    std::vector<ThreePartitionInstance> all;
    for (std::size_t K = 1; K <= 3; ++K)
        for (auto& tpi : oracle::enumerate_partition_instances(K, 12))
            all.push_back(std::move(tpi));
    return all;
}

Outcome fact_reproduction(const std::vector<ThreePartitionInstance>& corpus)
{
    int yes = 0, bad = 0;
    double worst_value = 0.0, worst_power = 0.0;
    for (const auto& tpi : corpus) {
        if (!solve_3partition_bruteforce(tpi))
            continue;
        ++yes;
        const auto r = solve_sumrate(encode(tpi));
        const double B = static_cast<double>(tpi.bound);
        const double P = 3.0 * static_cast<double>(tpi.groups);
        const double dv = std::fabs(r.value - B);
        const double dp = std::fabs(r.allocation.total_power() - P);
        worst_value = std::max(worst_value, dv);
        worst_power = std::max(worst_power, dp);
        bad += dv > 1e-9 || dp > 1e-9;
    }
    return {bad == 0 && yes > 0,
            fmt("%d yes-instances, %d failures, worst |value-B| %.3g, worst |power-3K| %.3g (tol 1e-9)", yes, bad,
                worst_value, worst_power)};
}

Outcome reduction_equivalence(const std::vector<ThreePartitionInstance>& corpus)
{
    int agree = 0, no = 0, certificates = 0, yes = 0;
    for (const auto& tpi : corpus) {
        const auto r = verify_reduction(tpi);
        agree += r.agree;
        if (r.partition_exists) {
            ++yes;
            certificates += r.decoded_is_certificate;
        } else {
            ++no;
        }
    }
    const int n = static_cast<int>(corpus.size());
    return {agree == n && n >= 50 && no >= 5 && certificates == yes,
            fmt("%d instances (%d no), %d agree, %d/%d decoded certificates", n, no, agree, certificates, yes)};
}

Outcome utility_chain()
{
    std::mt19937_64 rng(404);
    std::uniform_int_distribution<int> length(1, 10);
    std::uniform_real_distribution<double> uniform(0.0, 10.0);
    std::exponential_distribution<double> expo(0.3);
    std::lognormal_distribution<double> wide(0.0, 2.5);
    int violations = 0, strict_checked = 0, strict_fail = 0;
    double worst = 0.0;
    const int total = 100000;
    for (int i = 0; i < total; ++i) {
        std::vector<double> r(length(rng));
        const int family = i % 4;
        for (double& x : r) {
            switch (family) {
            case 0: x = uniform(rng); break;
            case 1: x = expo(rng); break;
            case 2: x = wide(rng); break;
            default: x = (rng() % 5 == 0) ? 0.0 : uniform(rng); break;
            }
        }
        const double h1 = utility(r, Utility::H1), h2 = utility(r, Utility::H2);
        const double h3 = utility(r, Utility::H3), h4 = utility(r, Utility::H4);
        const double slack = std::min({h3 - h4, h2 - h3, h1 - h2});
        worst = std::min(worst, slack);
        violations += slack < -1e-12;
        const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
        // With a zero rate the geometric and harmonic means are both zero, so
        // strictness is only defined on positive vectors.
        if (*hi - *lo > 1e-6 && *lo > 0) {
            ++strict_checked;
            strict_fail += !(h4 < h3 && h3 < h2 && h2 < h1);
        }
    }
    return {violations == 0 && strict_fail == 0,
            fmt("%d vectors, %d chain violations (min slack %.3g), %d/%d strict", total, violations, worst,
                strict_checked - strict_fail, strict_checked)};
}

Outcome waterfill_duality()
{
    std::mt19937_64 rng(505);
    std::uniform_int_distribution<int> size(1, 12);
    std::exponential_distribution<double> fading(1.0);
    std::uniform_real_distribution<double> cap(0.1, 4.0);
    std::uniform_real_distribution<double> frac(0.01, 1.2);
    int dual_bad = 0, kkt_bad = 0, n = 0;
    double worst_dual = 0.0, worst_kkt = 0.0;
    for (; n < 10000; ++n) {
        ChannelVector ch;
        const int M = size(rng);
        double cap_total = 0.0;
        for (int m = 0; m < M; ++m) {
            ch.gains.push_back(rng() % 10 == 0 ? 0.0 : fading(rng));
            ch.caps.push_back(cap(rng));
            if (ch.gains.back() > 0)
                cap_total += ch.caps.back();
        }
        if (cap_total == 0.0)
            ch.gains[0] = 1.0, cap_total = ch.caps[0];
        // stay below the total usable cap so the budget binds
        const double T = std::min(frac(rng), 0.999) * cap_total;
        const auto fwd = waterfill_capped(ch, T);
        for (int m = 0; m < M; ++m) {
            const double g = ch.gains[m];
            const double expect = g > 0 ? std::clamp(fwd.water_level - 1.0 / g, 0.0, ch.caps[m]) : 0.0;
            const double d = std::fabs(fwd.powers[m] - expect);
            worst_kkt = std::max(worst_kkt, d);
            kkt_bad += d > 1e-9;
        }
        const auto inv = inverse_waterfill_capped(ch, fwd.value);
        if (!std::holds_alternative<WaterfillResult>(inv)) {
            ++dual_bad;
            continue;
        }
        const double d = rel_gap(std::get<WaterfillResult>(inv).total_power, T);
        worst_dual = std::max(worst_dual, d);
        dual_bad += d > 1e-8;
    }
    return {dual_bad == 0 && kkt_bad == 0,
            fmt("%d channels, duality worst rel %.3g (tol 1e-8), KKT worst %.3g (tol 1e-9)", n, worst_dual,
                worst_kkt)};
}

Outcome matching_subclass()
{
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> target(0.02, 1.0);
    int n = 0, bad = 0, feasible = 0;
    double worst = 0.0;
    for (; n < 280; ++n) {
        const std::size_t K = 1 + n % 7;
        auto inst = oracle::random_instance(rng, K, K);
        std::vector<double> t(K);
        for (double& x : t)
            x = target(rng);
        inst.rate_targets = t;
        const auto m = min_power_matching(inst);
        const auto e = exact_min_total_power(inst);
        if (m.status != e.status) {
            ++bad;
            continue;
        }
        if (m.status != SolveStatus::Optimal)
            continue;
        ++feasible;
        const double gap = rel_gap(m.value, e.value);
        worst = std::max(worst, gap);
        bad += gap > 1e-8;
    }
    return {bad == 0 && feasible >= 200,
            fmt("%d instances (%d feasible), %d mismatches, worst rel gap %.3g (tol 1e-8)", n, feasible, bad, worst)};
}

Outcome complexity()
{
    const auto rows = bench_sumrate({1000, 10000, 100000, 1000000}, 100, 707, 3);
    const double slope = loglog_slope(rows);
    bool fast = true;
    std::ostringstream detail;
    for (const auto& r : rows) {
        fast = fast && r.seconds < 2.0;
        detail << "N=" << r.subcarriers << ":" << fmt("%.4gs", r.seconds) << " ";
    }
    detail << fmt("slope %.3f (max 1.2, each < 2s)", slope);
    return {fast && slope <= 1.2, detail.str()};
}

// Largest min(r1, r2) over the power grid with step h, receiver k alone on subcarrier perm[k].
double grid_min_rate(const SystemInstance& inst, const std::vector<std::size_t>& perm, double h)
{
    const double P = *inst.total_budget;
    const double g0 = inst.gains(0, perm[0]) / inst.noises(0, perm[0]);
    const double g1 = inst.gains(1, perm[1]) / inst.noises(1, perm[1]);
    const double c0 = inst.subcarrier_caps[perm[0]], c1 = inst.subcarrier_caps[perm[1]];
    double best = 0.0;
    for (double p0 = 0.0; p0 <= c0 && p0 <= P; p0 += h) {
        const double r0 = oracle::log2_1p(g0 * p0);
        for (double p1 = 0.0; p1 <= c1 && p0 + p1 <= P; p1 += h)
            best = std::max(best, std::min(r0, oracle::log2_1p(g1 * p1)));
    }
    return best;
}

// One subcarrier per receiver: rate t costs (2^t - 1)/g on each. Comparisons
// carry 1e-12 relative slack so a rate sitting exactly at a cap survives rounding.
bool one_to_one_feasible(const SystemInstance& inst, const std::vector<std::size_t>& perm, double t)
{
    double total = 0.0;
    for (std::size_t k = 0; k < 2; ++k) {
        const double g = inst.gains(k, perm[k]) / inst.noises(k, perm[k]);
        const double need = std::expm1(t * std::log(2.0)) / g;
        if (need > inst.subcarrier_caps[perm[k]] * (1 + 1e-12))
            return false;
        total += need;
    }
    return total <= *inst.total_budget * (1 + 1e-12);
}

Outcome minrate_bisection()
{
    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> gain(0.05, 0.65);
    std::uniform_real_distribution<double> cap(0.3, 2.0);
    std::uniform_real_distribution<double> budget(0.2, 3.0);
    const double tol = 1e-9;
    int n = 0, grid_bad = 0, self_bad = 0;
    double worst_grid = 0.0;
    for (; n < 40; ++n) {
        SystemInstance inst;
        inst.num_receivers = 2;
        inst.num_subcarriers = 2;
        inst.gains = Matrix(2, 2);
        inst.noises = Matrix(2, 2, 1.0);
        for (double& g : inst.gains.values())
            g = gain(rng);
        inst.subcarrier_caps = {cap(rng), cap(rng)};
        inst.total_budget = budget(rng);

        double grid_best = 0.0;
        for (const std::vector<std::size_t>& perm : {std::vector<std::size_t>{0, 1}, std::vector<std::size_t>{1, 0}}) {
            Assignment a;
            a.serving_receiver.resize(2);
            for (std::size_t k = 0; k < 2; ++k)
                a.serving_receiver[perm[k]] = k;
            const double t = minrate_max_bisection(inst, a, tol).t_star;
            const double grid = grid_min_rate(inst, perm, 1e-3);
            grid_best = std::max(grid_best, grid);
            worst_grid = std::max(worst_grid, std::fabs(t - grid));
            grid_bad += std::fabs(t - grid) > 1e-3;
            self_bad += !one_to_one_feasible(inst, perm, t) || one_to_one_feasible(inst, perm, t + tol);
        }
        // an assignment giving both subcarriers to one receiver leaves the other at rate zero
        for (std::size_t k = 0; k < 2; ++k) {
            Assignment both{{k, k}};
            self_bad += minrate_max_bisection(inst, both, tol).t_star != 0.0;
        }
        const double exact = exact_max_utility(inst, Utility::H4).value;
        worst_grid = std::max(worst_grid, std::fabs(exact - grid_best));
        grid_bad += std::fabs(exact - grid_best) > 1e-3;
    }
    return {grid_bad == 0 && self_bad == 0,
            fmt("%d instances, grid worst |t*-t_grid| %.3g (tol 1e-3), %d grid / %d self-consistency failures", n,
                worst_grid, grid_bad, self_bad)};
}

} // namespace

int main()
{
    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria;
    const auto corpus = partition_corpus();
    criteria.emplace_back("1 two-stage optimality", two_stage_optimality);
    criteria.emplace_back("2 fact reproduction", [&] { return fact_reproduction(corpus); });
    criteria.emplace_back("3 reduction equivalence", [&] { return reduction_equivalence(corpus); });
    criteria.emplace_back("4 utility chain", utility_chain);
    criteria.emplace_back("5 water-filling duality", waterfill_duality);
    criteria.emplace_back("6 N=K matching", matching_subclass);
    criteria.emplace_back("7 complexity", complexity);
    criteria.emplace_back("8 min-rate bisection", minrate_bisection);

    int failed = 0;
    for (const auto& [name, run] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        const Outcome o = run();
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}

#include "ofdma/model.hpp"
#include "ofdma/reduction.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace ofdma;

namespace {

SystemInstance unit_instance(std::size_t K, std::size_t N)
{
    SystemInstance inst;
    inst.num_receivers = K;
    inst.num_subcarriers = N;
    inst.gains = Matrix(K, N, 1.0);
    inst.noises = Matrix(K, N, 1.0);
    inst.subcarrier_caps.assign(N, 10.0);
    return inst;
}

bool has_error(const std::vector<std::string>& errors, const std::string& text)
{
    for (const auto& e : errors)
        if (e.find(text) != std::string::npos)
            return true;
    return false;
}

} // namespace

TEST_CASE("compute_rates")
{
    SUBCASE("zero allocation gives zero rates")
    {
        const auto inst = unit_instance(3, 4);
        const auto rates = compute_rates(inst, Allocation(3, 4));
        for (double r : rates)
            CHECK(r == 0.0);
    }
    SUBCASE("single unit channel at unit power carries one bit")
    {
        const auto inst = unit_instance(1, 1);
        Allocation a(1, 1);
        a.powers(0, 0) = 1.0;
        CHECK(compute_rates(inst, a)[0] == 1.0);
    }
    SUBCASE("zero gain contributes nothing regardless of power")
    {
        auto inst = unit_instance(1, 2);
        inst.gains(0, 1) = 0.0;
        Allocation a(1, 2);
        a.powers(0, 1) = 5.0;
        CHECK(compute_rates(inst, a)[0] == 0.0);
    }
    SUBCASE("dimension mismatch throws")
    {
        CHECK_THROWS_AS(compute_rates(unit_instance(2, 3), Allocation(3, 2)), DimensionError);
    }
    SUBCASE("certificate on an encoded instance gives the bound exactly")
    {
        const ThreePartitionInstance tpi{{6, 6, 7, 7, 7, 7}, 20, 2};
        const Partition p{{{0, 2, 3}, {1, 4, 5}}};
        const auto rates = compute_rates(encode(tpi), certificate_to_allocation(tpi, p));
        CHECK(rates[0] == 20.0);
        CHECK(rates[1] == 20.0);
    }
}

TEST_CASE("binary allocations on encoded instances give integer rates exactly")
{
    std::mt19937_64 rng(7);
    for (std::int64_t a = 1; a <= kMaxExactItem; ++a) {
        const double gain = static_cast<double>((std::int64_t{1} << a) - 1);
        CHECK(rate_bits(gain) == static_cast<double>(a));
    }
    // random triple groupings of a K=3 instance
    const ThreePartitionInstance tpi{{38, 39, 40, 41, 42, 43, 44, 45, 46}, 126, 3};
    const auto inst = encode(tpi);
    std::vector<std::size_t> order(9);
    std::iota(order.begin(), order.end(), 0);
    for (int trial = 0; trial < 50; ++trial) {
        std::shuffle(order.begin(), order.end(), rng);
        Allocation alloc(3, 9);
        std::vector<std::int64_t> sums(3, 0);
        for (std::size_t i = 0; i < 9; ++i) {
            alloc.powers(i / 3, order[i]) = 1.0;
            sums[i / 3] += tpi.items[order[i]];
        }
        const auto rates = compute_rates(inst, alloc);
        for (std::size_t k = 0; k < 3; ++k)
            CHECK(rates[k] == static_cast<double>(sums[k]));
    }
}

TEST_CASE("compute_rates properties")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t K = 1 + rng() % 3;
        const std::size_t N = K + rng() % 4;
        auto inst = oracle::random_instance(rng, K, N);
        Allocation alloc(K, N);
        for (double& p : alloc.powers.values())
            p = unit(rng);
        const auto base = compute_rates(inst, alloc);

        // monotone in each entry, other receivers untouched
        const std::size_t k = rng() % K, n = rng() % N;
        Allocation more = alloc;
        more.powers(k, n) += unit(rng);
        const auto raised = compute_rates(inst, more);
        for (std::size_t j = 0; j < K; ++j) {
            if (j == k)
                CHECK(raised[j] >= base[j]);
            else
                CHECK(raised[j] == base[j]);
        }

        // scaling a receiver's gains and noises together changes nothing
        const double c = 0.1 + 10.0 * unit(rng);
        for (std::size_t m = 0; m < N; ++m) {
            inst.gains(k, m) *= c;
            inst.noises(k, m) *= c;
        }
        const auto scaled = compute_rates(inst, alloc);
        for (std::size_t j = 0; j < K; ++j)
            CHECK(scaled[j] == doctest::Approx(base[j]).epsilon(1e-13));
    }
}

TEST_CASE("check_allocation")
{
    SUBCASE("zero allocation misses positive targets")
    {
        auto inst = unit_instance(2, 2);
        inst.rate_targets = std::vector<double>{1.0, 1.0};
        const auto r = check_allocation(inst, Allocation(2, 2), 1e-12);
        CHECK(r.ofdma_ok);
        CHECK(r.caps_ok);
        CHECK_FALSE(r.qos_ok);
        CHECK(r.budget_ok);
        CHECK(r.total_power == 0.0);
    }
    SUBCASE("shared subcarrier violates exclusivity")
    {
        const auto inst = unit_instance(2, 2);
        Allocation a(2, 2);
        a.powers(0, 0) = 0.5;
        a.powers(1, 0) = 0.5;
        const auto r = check_allocation(inst, a, 1e-12);
        CHECK_FALSE(r.ofdma_ok);
        CHECK(r.caps_ok);
    }
    SUBCASE("entries below the tolerance do not count as shared")
    {
        const auto inst = unit_instance(2, 1);
        Allocation a(2, 1);
        a.powers(0, 0) = 1.0;
        a.powers(1, 0) = 1e-14;
        CHECK(check_allocation(inst, a, 1e-12).ofdma_ok);
    }
    SUBCASE("caps and budget")
    {
        auto inst = unit_instance(1, 2);
        inst.total_budget = 5.0;
        Allocation a(1, 2);
        a.powers(0, 0) = 10.5;
        auto r = check_allocation(inst, a, 1e-12);
        CHECK_FALSE(r.caps_ok);
        CHECK_FALSE(r.budget_ok);
        a.powers(0, 0) = 4.0;
        a.powers(0, 1) = 1.0;
        r = check_allocation(inst, a, 1e-12);
        CHECK(r.all_ok());
        CHECK(r.total_power == 5.0);
    }
    SUBCASE("certificate on encoded yes-instance passes everything with power 3K")
    {
        const ThreePartitionInstance tpi{{6, 6, 7, 7, 7, 7}, 20, 2};
        const auto inst = encode(tpi);
        const auto alloc = certificate_to_allocation(tpi, Partition{{{0, 2, 3}, {1, 4, 5}}});
        const auto r = check_allocation(inst, alloc, default_tolerance(inst));
        CHECK(r.all_ok());
        CHECK(r.total_power == 6.0);
    }
}

TEST_CASE("utility functions")
{
    const std::vector<double> equal{2, 2, 2};
    for (auto kind : {Utility::H1, Utility::H2, Utility::H3, Utility::H4})
        CHECK(utility(equal, kind) == doctest::Approx(2.0).epsilon(1e-15));

    const std::vector<double> r13{1, 3};
    CHECK(utility(r13, Utility::H1) == 2.0);
    CHECK(utility(r13, Utility::H2) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
    CHECK(utility(r13, Utility::H3) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(utility(r13, Utility::H4) == 1.0);

    const std::vector<double> r05{0, 5};
    CHECK(utility(r05, Utility::H1) == 2.5);
    CHECK(utility(r05, Utility::H2) == 0.0);
    CHECK(utility(r05, Utility::H3) == 0.0);
    CHECK(utility(r05, Utility::H4) == 0.0);

    const std::vector<double> negative{1, -0.5};
    CHECK_THROWS_AS(utility(negative, Utility::H1), std::invalid_argument);

    // log-domain geometric mean does not overflow
    const std::vector<double> huge(400, 1e300);
    CHECK(utility(huge, Utility::H2) == doctest::Approx(1e300).epsilon(1e-12));
}

TEST_CASE("utility chain H4 <= H3 <= H2 <= H1")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> rate(0.0, 10.0);
    for (int trial = 0; trial < 5000; ++trial) {
        std::vector<double> rates(1 + rng() % 6);
        for (double& r : rates)
            r = rng() % 10 == 0 ? 0.0 : rate(rng);
        const double h1 = utility(rates, Utility::H1);
        const double h2 = utility(rates, Utility::H2);
        const double h3 = utility(rates, Utility::H3);
        const double h4 = utility(rates, Utility::H4);
        CHECK(h4 <= h3 * (1 + 1e-12));
        CHECK(h3 <= h2 * (1 + 1e-12));
        CHECK(h2 <= h1 * (1 + 1e-12));
        const auto [lo, hi] = std::minmax_element(rates.begin(), rates.end());
        if (*hi - *lo > 1e-6 && *lo > 0) {
            CHECK(h4 < h3);
            CHECK(h3 < h2);
            CHECK(h2 < h1);
        }
    }
}

TEST_CASE("validate_instance")
{
    auto inst = unit_instance(2, 3);
    CHECK(has_error(validate_instance(inst, Problem::MinPower), "rate_targets required"));
    CHECK(has_error(validate_instance(inst, Problem::MaxUtility), "total_budget required"));

    inst.rate_targets = std::vector<double>{1.0, 2.0};
    CHECK(validate_instance(inst, Problem::MinPower).empty());

    inst.noises(0, 0) = 0.0;
    inst.gains(1, 2) = -1.0;
    inst.subcarrier_caps[1] = 0.0;
    const auto errors = validate_instance(inst, Problem::MaxUtility);
    CHECK(has_error(errors, "noise must be positive"));
    CHECK(has_error(errors, "gain must be nonnegative"));
    CHECK(has_error(errors, "cap must be positive"));
    CHECK(has_error(errors, "total_budget required"));
    CHECK(errors.size() == 4);

    auto wide = unit_instance(3, 2);
    CHECK(has_error(validate_instance(wide, Problem::MaxUtility), "at least num_receivers"));

    CHECK_THROWS_AS(require_valid(unit_instance(1, 1), Problem::MaxUtility), ValidationError);
}

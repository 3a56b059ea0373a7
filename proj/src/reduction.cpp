#include "ofdma/reduction.hpp"

#include "ofdma/sumrate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ofdma {

namespace {

void require_valid_partition_instance(const ThreePartitionInstance& tpi)
{
    for (std::int64_t a : tpi.items) {
        if (a > kMaxExactItem) {
            std::ostringstream os;
            os << "item " << a << " exceeds " << kMaxExactItem << "; 2^a - 1 is not exact in double precision";
            throw PrecisionGuardError(os.str());
        }
    }
    auto errors = validate_partition_instance(tpi);
    if (!errors.empty())
        throw ValidationError(std::move(errors));
}

bool backtrack(const ThreePartitionInstance& tpi, std::vector<char>& used, Partition& out)
{
    const std::size_t n_items = tpi.items.size();
    const auto first = std::find(used.begin(), used.end(), false);
    if (first == used.end())
        return true;
    const std::size_t i = static_cast<std::size_t>(first - used.begin());
    used[i] = true;
    for (std::size_t j = i + 1; j < n_items; ++j) {
        if (used[j] || tpi.items[i] + tpi.items[j] >= tpi.bound)
            continue;
        used[j] = true;
        for (std::size_t l = j + 1; l < n_items; ++l) {
            if (used[l] || tpi.items[i] + tpi.items[j] + tpi.items[l] != tpi.bound)
                continue;
            used[l] = true;
            out.groups.push_back({i, j, l});
            if (backtrack(tpi, used, out))
                return true;
            out.groups.pop_back();
            used[l] = false;
        }
        used[j] = false;
    }
    used[i] = false;
    return false;
}

} // namespace

std::vector<std::string> validate_partition_instance(const ThreePartitionInstance& tpi)
{
    std::vector<std::string> errors;
    if (tpi.groups == 0)
        errors.emplace_back("groups must be positive");
    if (tpi.bound <= 0)
        errors.emplace_back("bound must be positive");
    if (tpi.items.size() != 3 * tpi.groups)
        errors.emplace_back("there must be exactly 3 * groups items");
    for (std::int64_t a : tpi.items) {
        if (a <= 0) {
            errors.emplace_back("items must be positive");
            break;
        }
    }
    // B/4 < a < B/2 in integers: 4a > B and 2a < B.
    for (std::int64_t a : tpi.items) {
        if (!(4 * a > tpi.bound && 2 * a < tpi.bound)) {
            errors.emplace_back("every item must lie strictly between bound/4 and bound/2");
            break;
        }
    }
    const std::int64_t sum = std::accumulate(tpi.items.begin(), tpi.items.end(), std::int64_t{0});
    if (sum != static_cast<std::int64_t>(tpi.groups) * tpi.bound)
        errors.emplace_back("items must sum to groups * bound");
    if (std::any_of(tpi.items.begin(), tpi.items.end(), [](std::int64_t a) { return a > kMaxExactItem; }))
        errors.emplace_back("item exceeds the exact-precision limit of 52");
    return errors;
}

bool is_structurally_valid(const Partition& partition, std::size_t num_items)
{
    std::vector<char> seen(num_items, false);
    std::size_t count = 0;
    for (const auto& group : partition.groups) {
        if (group.size() != 3)
            return false;
        for (std::size_t n : group) {
            if (n >= num_items || seen[n])
                return false;
            seen[n] = true;
            ++count;
        }
    }
    return count == num_items;
}

bool is_certificate(const ThreePartitionInstance& tpi, const Partition& partition)
{
    if (partition.groups.size() != tpi.groups || !is_structurally_valid(partition, tpi.items.size()))
        return false;
    return std::all_of(partition.groups.begin(), partition.groups.end(), [&](const auto& group) {
        std::int64_t s = 0;
        for (std::size_t n : group)
            s += tpi.items[n];
        return s == tpi.bound;
    });
}

SystemInstance encode(const ThreePartitionInstance& tpi)
{
    require_valid_partition_instance(tpi);
    const std::size_t K = tpi.groups;
    const std::size_t N = tpi.items.size();

    SystemInstance instance;
    instance.num_receivers = K;
    instance.num_subcarriers = N;
    instance.gains = Matrix(K, N);
    instance.noises = Matrix(K, N, 1.0);
    instance.subcarrier_caps.assign(N, 1.0);
    instance.rate_targets = std::vector<double>(K, static_cast<double>(tpi.bound));
    instance.total_budget = static_cast<double>(N);
    for (std::size_t n = 0; n < N; ++n) {
        const auto gain = static_cast<double>((std::int64_t{1} << tpi.items[n]) - 1);
        for (std::size_t k = 0; k < K; ++k)
            instance.gains(k, n) = gain;
    }
    return instance;
}

Allocation certificate_to_allocation(const ThreePartitionInstance& tpi, const Partition& partition)
{
    if (partition.groups.size() != tpi.groups || !is_structurally_valid(partition, tpi.items.size()))
        throw std::invalid_argument("partition must split the items into disjoint triples, one per group");
    Allocation alloc(tpi.groups, tpi.items.size());
    for (std::size_t k = 0; k < partition.groups.size(); ++k)
        for (std::size_t n : partition.groups[k])
            alloc.powers(k, n) = 1.0;
    return alloc;
}

std::variant<Partition, NotBinary> decode_partition(const Allocation& alloc, double tol)
{
    const std::size_t K = alloc.powers.rows();
    const std::size_t N = alloc.powers.cols();
    Partition partition;
    partition.groups.resize(K);
    std::vector<int> owners(N, 0);
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t n = 0; n < N; ++n) {
            const double p = alloc.powers(k, n);
            if (std::fabs(p - 1.0) <= tol) {
                partition.groups[k].push_back(n);
                ++owners[n];
            } else if (std::fabs(p) > tol) {
                std::ostringstream os;
                os << "power " << p << " at receiver " << k + 1 << ", subcarrier " << n + 1 << " is not 0 or 1";
                return NotBinary{os.str()};
            }
        }
    }
    for (std::size_t n = 0; n < N; ++n)
        if (owners[n] != 1)
            return NotBinary{"subcarrier " + std::to_string(n + 1) + " is not used by exactly one receiver"};
    if (!is_structurally_valid(partition, N))
        return NotBinary{"groups are not triples"};
    return partition;
}

std::optional<Partition> solve_3partition_bruteforce(const ThreePartitionInstance& tpi)
{
    require_valid_partition_instance(tpi);
    if (tpi.groups > 4)
        throw std::invalid_argument("backtracking oracle is limited to at most 4 groups");
    std::vector<char> used(tpi.items.size(), false);
    Partition partition;
    if (backtrack(tpi, used, partition))
        return partition;
    return std::nullopt;
}

EquivalenceReport verify_reduction(const ThreePartitionInstance& tpi, const ExactOptions& options)
{
    EquivalenceReport report;
    const SystemInstance instance = encode(tpi);

    report.partition = solve_3partition_bruteforce(tpi);
    report.partition_exists = report.partition.has_value();

    const SolveReport exact = exact_min_total_power(instance, options);
    report.allocation_feasible = exact.status == SolveStatus::Optimal;
    report.agree = report.partition_exists == report.allocation_feasible;
    if (report.allocation_feasible) {
        report.allocation = exact.allocation;
        report.min_total_power = exact.value;
        auto decoded = decode_partition(exact.allocation);
        if (auto* p = std::get_if<Partition>(&decoded)) {
            report.decoded = *p;
            report.decoded_is_certificate = is_certificate(tpi, *p);
        }
    }

    const SolveReport sumrate = solve_sumrate(instance);
    report.sumrate_value = sumrate.value;
    report.sumrate_power = sumrate.allocation.total_power();
    const double B = static_cast<double>(tpi.bound);
    const double three_k = static_cast<double>(3 * tpi.groups);
    report.fact1_ok = std::fabs(report.sumrate_value - B) <= 1e-9 * std::max(1.0, B);
    report.fact2_ok = std::fabs(report.sumrate_power - three_k) <= 1e-9 * std::max(1.0, three_k);
    return report;
}

} // namespace ofdma

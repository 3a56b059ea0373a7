#pragma once

#include "ofdma/exact.hpp"
#include "ofdma/model.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ofdma {

/// 3K positive integers, each strictly between bound/4 and bound/2, summing
/// to groups * bound.
struct ThreePartitionInstance {
    std::vector<std::int64_t> items;
    std::int64_t bound = 0;
    std::size_t groups = 0;
};

// Largest item whose gain 2^a - 1 is exact in a double.
inline constexpr std::int64_t kMaxExactItem = 52;

/// Every violated invariant; empty means valid.
std::vector<std::string> validate_partition_instance(const ThreePartitionInstance& tpi);

class PrecisionGuardError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// K disjoint groups of item indices (zero-based, ascending within a group).
struct Partition {
    std::vector<std::vector<std::size_t>> groups;
    friend bool operator==(const Partition&, const Partition&) = default;
};

// Disjoint, covering, every group of size 3.
bool is_structurally_valid(const Partition& partition, std::size_t num_items);
// Structurally valid and every group sums to the bound.
bool is_certificate(const ThreePartitionInstance& tpi, const Partition& partition);

/// OFDMA instance with K receivers and 3K subcarriers: gain 2^a_n - 1 on
/// subcarrier n for every receiver, unit noise, unit caps, rate target B for
/// every receiver and total budget 3K.
/// Throws PrecisionGuardError when an item exceeds kMaxExactItem and
/// ValidationError when the instance is otherwise malformed.
SystemInstance encode(const ThreePartitionInstance& tpi);

/// Unit power on each receiver's group, zero elsewhere.
Allocation certificate_to_allocation(const ThreePartitionInstance& tpi, const Partition& partition);

struct NotBinary {
    std::string reason;
};

/// Group k = {n : |p(k, n) - 1| <= tol}. NotBinary when an entry is not within
/// tol of 0 or 1, or the groups do not partition the subcarriers.
std::variant<Partition, NotBinary> decode_partition(const Allocation& alloc, double tol = 1e-6);

/// Exhaustive backtracking over triples; returns the lexicographically first
/// certificate. Limited to groups <= 4.
std::optional<Partition> solve_3partition_bruteforce(const ThreePartitionInstance& tpi);

struct EquivalenceReport {
    bool partition_exists = false;      // backtracking oracle
    bool allocation_feasible = false;   // exhaustive OFDMA feasibility
    bool agree = false;
    std::optional<Partition> partition;         // from the backtracking oracle
    std::optional<Allocation> allocation;       // minimum-power allocation when feasible
    std::optional<Partition> decoded;           // decoded from `allocation`
    bool decoded_is_certificate = false;
    double min_total_power = 0.0;
    double sumrate_value = 0.0;   // two-stage optimum with budget 3K
    double sumrate_power = 0.0;
    bool fact1_ok = false;        // sumrate_value == B
    bool fact2_ok = false;        // sumrate_power == 3K
};

/// Runs both exhaustive oracles independently and compares their answers;
/// also checks the sum-rate optimum (B) and its power (3K) on the encoding.
EquivalenceReport verify_reduction(const ThreePartitionInstance& tpi, const ExactOptions& options = {});

} // namespace ofdma

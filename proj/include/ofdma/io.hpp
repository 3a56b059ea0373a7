#pragma once

#include "ofdma/model.hpp"
#include "ofdma/reduction.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ofdma {

inline constexpr int kSchemaVersion = 1;

/// JSON instance file:
///   {"schema_version", "problem": "min_power"|"max_utility", "utility"?: "h1".."h4",
///    "K", "N", "gains": [[...]], "noises": [[...]], "caps": [...],
///    "budget"?, "targets"?: [...]}
/// Unknown fields are rejected.
struct InstanceFile {
    int schema_version = kSchemaVersion;
    Problem problem = Problem::MaxUtility;
    std::optional<Utility> utility;
    SystemInstance instance;
};

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

InstanceFile parse_instance_file(std::string_view text);

// Canonical form: fixed field order, doubles with 17 significant digits.
// Reading canonical output and writing it again is byte-identical.
std::string format_instance_file(const InstanceFile& file);

// {"items": [...], "bound": B, "groups": K}
ThreePartitionInstance parse_partition_file(std::string_view text);
std::string format_partition_file(const ThreePartitionInstance& tpi);

// %.17g
std::string format_double(double value);

/// One row per (receiver, subcarrier), both 1-based:
///   receiver,subcarrier,power,rate_contrib
std::string format_allocation_csv(const SystemInstance& instance, const Allocation& alloc);

std::optional<Utility> parse_utility(std::string_view name);

} // namespace ofdma

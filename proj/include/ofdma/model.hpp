#pragma once

#include "ofdma/matrix.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ofdma {

enum class Utility { H1, H2, H3, H4 };
enum class Problem { MinPower, MaxUtility };

std::string_view to_string(Utility kind) noexcept;
std::string_view to_string(Problem problem) noexcept;

/// Single-cell downlink OFDMA problem data.
///
/// gains(k, n) is the channel power gain of receiver k on subcarrier n and
/// noises(k, n) the matching noise power. Indices are zero-based.
/// total_budget is required for utility maximization, rate_targets for
/// total-power minimization; presence is checked by validate_instance().
struct SystemInstance {
    std::size_t num_receivers = 0;
    std::size_t num_subcarriers = 0;
    Matrix gains;
    Matrix noises;
    std::vector<double> subcarrier_caps;
    std::optional<double> total_budget;
    std::optional<std::vector<double>> rate_targets;

    double snr_slope(std::size_t k, std::size_t n) const noexcept { return gains(k, n) / noises(k, n); }
    double max_cap() const noexcept;
};

/// K x N power matrix.
struct Allocation {
    Matrix powers;

    Allocation() = default;
    explicit Allocation(Matrix p) : powers(std::move(p)) {}
    Allocation(std::size_t receivers, std::size_t subcarriers) : powers(receivers, subcarriers) {}

    double total_power() const noexcept;
    friend bool operator==(const Allocation&, const Allocation&) = default;
};

using RateVector = std::vector<double>;

struct ConstraintReport {
    bool ofdma_ok = false;
    bool caps_ok = false;
    bool qos_ok = false;
    bool budget_ok = false;
    double total_power = 0.0;

    bool all_ok() const noexcept { return ofdma_ok && caps_ok && qos_ok && budget_ok; }
};

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an instance fails validate_instance() at solve time.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;
};

/// Rate in bits of a single subcarrier at the given SNR.
double rate_bits(double snr) noexcept;

RateVector compute_rates(const SystemInstance& instance, const Allocation& alloc);

ConstraintReport check_allocation(const SystemInstance& instance, const Allocation& alloc, double tol);

// 1e-12 times the largest subcarrier cap.
double default_tolerance(const SystemInstance& instance) noexcept;

/// Mean, geometric mean, harmonic mean or minimum of the receiver rates.
/// H2 is evaluated in the log domain; H2, H3 and H4 are 0 as soon as one
/// rate is 0. Throws std::invalid_argument on negative or empty input.
double utility(std::span<const double> rates, Utility kind);

/// Every violated invariant, not just the first. Empty means valid.
std::vector<std::string> validate_instance(const SystemInstance& instance, Problem problem);

// validate_instance() that throws ValidationError on any violation.
void require_valid(const SystemInstance& instance, Problem problem);

} // namespace ofdma

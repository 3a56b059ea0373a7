#pragma once

#include "ofdma/model.hpp"
#include "ofdma/report.hpp"

#include <cstdint>
#include <stdexcept>

namespace ofdma {

struct ExactOptions {
    std::uint64_t enumeration_limit = 10'000'000;
    unsigned threads = 1;
    double bisection_tol = 1e-9;     // absolute, on the common rate
    double gradient_tol = 1e-8;      // projected-gradient norm
    std::size_t max_iterations = 100'000;
};

/// K^N exceeds the configured enumeration limit.
class LimitExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Precondition of a specialized solver does not hold (e.g. N != K for matching).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Exhaustive minimum total power meeting every rate target.
///
/// Enumerates all K^N subcarrier-to-receiver assignments (subtrees that can no
/// longer reach some target are pruned); each assignment decomposes into one
/// inverse water-filling per receiver. Ties go to the lexicographically
/// smallest assignment, so the result does not depend on options.threads.
SolveReport exact_min_total_power(const SystemInstance& instance, const ExactOptions& options = {});

/// Exhaustive utility maximization under the total budget.
///
/// H4 uses min-rate bisection per assignment, H2/H3 projected gradient ascent
/// (status IterLimit if the winning assignment did not converge), H1 one
/// water-filling per assignment. Same tie-break as exact_min_total_power.
SolveReport exact_max_utility(const SystemInstance& instance, Utility kind, const ExactOptions& options = {});

struct MinRateResult {
    double t_star = 0.0;
    Allocation allocation;
};

/// Largest common rate t every receiver reaches on its assigned subcarriers
/// within the total budget, to absolute tolerance `tol`. Zero when some
/// receiver has no usable subcarrier.
MinRateResult minrate_max_bisection(const SystemInstance& instance, const Assignment& assignment, double tol = 1e-9);

/// Minimum total power for N == K by min-cost perfect matching; the cost of
/// serving receiver k alone on subcarrier n is noise * (2^target - 1) / gain.
/// Throws PreconditionError when N != K.
SolveReport min_power_matching(const SystemInstance& instance);

} // namespace ofdma

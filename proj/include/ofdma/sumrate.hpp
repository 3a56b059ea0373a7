#pragma once

#include "ofdma/model.hpp"
#include "ofdma/report.hpp"

namespace ofdma {

/// Serves every subcarrier from the receiver with the largest gain-to-noise
/// ratio; ties go to the smallest receiver index. O(KN) comparisons.
Assignment best_receiver_assignment(const SystemInstance& instance, SolveCounters* counters = nullptr);

/// Globally optimal sum-rate allocation under per-subcarrier caps and the
/// total budget: best-receiver assignment, then one capped water-filling
/// over the assigned ratios. report.value is the mean rate (H1).
/// For a single receiver this optimum is also optimal for H2, H3 and H4.
///
/// Throws ValidationError when the instance is invalid or has no budget.
SolveReport solve_sumrate(const SystemInstance& instance);

} // namespace ofdma

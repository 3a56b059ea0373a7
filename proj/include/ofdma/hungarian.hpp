#pragma once

#include <cstddef>
#include <vector>

namespace ofdma {

/// Min-cost perfect matching on a square cost matrix (Kuhn-Munkres with
/// potentials, O(n^3)). Returns the column matched to each row.
/// All costs must be finite.
std::vector<std::size_t> hungarian_min_cost(const std::vector<std::vector<double>>& cost);

} // namespace ofdma

#include "ofdma/hungarian.hpp"

#include <limits>
#include <stdexcept>

namespace ofdma {

std::vector<std::size_t> hungarian_min_cost(const std::vector<std::vector<double>>& cost)
{
    const std::size_t n = cost.size();
    for (const auto& row : cost)
        if (row.size() != n)
            throw std::invalid_argument("hungarian: cost matrix must be square");
    if (n == 0)
        return {};

    constexpr double inf = std::numeric_limits<double>::infinity();
    // 1-based rows/columns; column 0 is the virtual root of each augmenting tree.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> match_of_col(n + 1, 0), way(n + 1, 0);

    for (std::size_t i = 1; i <= n; ++i) {
        match_of_col[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = match_of_col[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j])
                    continue;
                const double reduced = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (reduced < minv[j]) {
                    minv[j] = reduced;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match_of_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match_of_col[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match_of_col[j0] = match_of_col[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<std::size_t> col_of_row(n, 0);
    for (std::size_t j = 1; j <= n; ++j)
        col_of_row[match_of_col[j] - 1] = j - 1;
    return col_of_row;
}

} // namespace ofdma

#pragma once

#include "wpccrn/types.hpp"

#include <utility>
#include <vector>

namespace wpccrn {

/// Optimal solution of the generic demand-splitting problem: fill the spent
/// side q in increasing-weight order, q_i = min(capacity, remaining demand);
/// the kept side is p_i = r_i - q_i. Ties break on the lower index.
/// Returns (p, q).
std::pair<std::vector<double>, std::vector<double>> greedy_allocate(
    const GreedyInstance& instance);

/// SU indices sorted by ascending gamma_ih / gamma_ip: the order in which SUs
/// take up relaying duty. The harvested-energy factor cancels from the ratio.
/// SUs with gamma_ip == 0 are pushed to the back (never relay candidates).
std::vector<int> relay_priority_order(const std::vector<double>& gamma_ih,
                                      const std::vector<double>& gamma_ip);

} // namespace wpccrn

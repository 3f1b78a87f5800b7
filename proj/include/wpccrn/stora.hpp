#pragma once

#include "wpccrn/core_math.hpp"
#include "wpccrn/fixed_set.hpp"
#include "wpccrn/types.hpp"

namespace wpccrn {

/// Sum-throughput optimal resource allocation: iterates the decoding-set
/// cutoff from N down to 1, solves the convex allocation problem for each,
/// and returns the best feasible outcome. feasible=false with zero
/// throughputs when every cutoff fails.
SchemeResult solve_stora(const ChannelState& channels, const ScenarioConfig& config,
                         const SolverTolerances& tol = {});

/// Convex allocation problem for a fixed decoding-set cutoff. The search
/// runs over (t_e, t_0) with the inner energy split filled greedily in
/// relay-priority order and access time shared in proportion to access
/// SNR-energy; both inner steps are exact consequences of the optimality
/// system, so the returned point satisfies it to line-search accuracy.
SchemeResult solve_fixed_set(int cutoff, const ChannelState& channels,
                             const ScenarioConfig& config, const SolverTolerances& tol = {});

/// Same, with relaying restricted to SUs where relay_mask[i] != 0
/// (selection baselines clamp the relay set this way).
SchemeResult solve_fixed_set_masked(int cutoff, const ChannelState& channels,
                                    const ScenarioConfig& config,
                                    const std::vector<char>& relay_mask,
                                    const SolverTolerances& tol = {});

} // namespace wpccrn

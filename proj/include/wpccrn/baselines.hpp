#pragma once

#include "wpccrn/core_math.hpp"
#include "wpccrn/rng.hpp"
#include "wpccrn/types.hpp"

namespace wpccrn {

/// Best single-SU selection: solves the allocation with exactly one relaying
/// SU for every candidate in the decoding set, keeps the best feasible one.
SchemeResult solve_bss(const ChannelState& channels, const ScenarioConfig& config,
                       const SolverTolerances& tol = {});

/// Random single-SU selection: one uniformly drawn decoder relays; infeasible
/// when that SU alone cannot carry the target rate.
SchemeResult solve_rss_single(const ChannelState& channels, const ScenarioConfig& config,
                              CounterRng& rng, const SolverTolerances& tol = {});

/// Random multiple-SU selection: uniformly drawn decoders accumulate until
/// the target rate is reachable, then the allocation is solved with that
/// relay set fixed. Same feasibility condition as the optimal scheme.
SchemeResult solve_rss_multi(const ChannelState& channels, const ScenarioConfig& config,
                             CounterRng& rng, const SolverTolerances& tol = {});

} // namespace wpccrn

#pragma once

#include "wpccrn/fixed_set.hpp"
#include "wpccrn/types.hpp"

#include <utility>
#include <vector>

// Two-level dual-decomposition iteration for the fixed-decoding-set problem:
// Level 1 alternates the energy subproblem (per-SU bisection on the energy
// multiplier) with the time subproblem (closed forms from the stationarity
// conditions) and ascends the coupling multipliers by projected gradients;
// Level 2 moves the harvesting duration along its subgradient with a
// diminishing step. Slower and looser than solve_fixed_set, which reaches the
// same optimum through the structure of the binding constraints; this mode is
// kept as the reference iteration and is cross-checked against it in tests.
namespace wpccrn {

/// Energy split for fixed times and multiplier lambda. Per SU, the access and
/// relay energies follow the positive-part closed forms while mu_i is
/// bisected on [1e-12, 1e12] until the energy budget binds; the relay
/// energies of the other SUs enter as a fixed point iterated in
/// relay-priority order. Returns (e_sh, e_sp).
std::pair<std::vector<double>, std::vector<double>> sp1_energy_allocation(
    const FixedSetContext& ctx, const std::vector<double>& t, double t_0, double t_e,
    double lambda, const SolverTolerances& tol);

/// Time split for fixed energies and multipliers: every SU with access energy
/// gets t_i = gamma_ih E_ih / x*(nu), and the relaying duration solves the
/// shifted stationarity condition; zero numerators give zero times.
std::pair<double, std::vector<double>> sp2_time_allocation(
    const FixedSetContext& ctx, const std::vector<double>& e_sh,
    const std::vector<double>& e_sp, const DualState& duals);

/// Full two-level iteration. converged=false after max_iterations without the
/// primal variables settling below epsilon.
SchemeResult solve_fixed_set_dual(int cutoff, const ChannelState& channels,
                                  const ScenarioConfig& config,
                                  const SolverTolerances& tol = {});

} // namespace wpccrn

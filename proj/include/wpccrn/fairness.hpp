#pragma once

#include "wpccrn/core_math.hpp"
#include "wpccrn/types.hpp"

#include <vector>

namespace wpccrn {

/// Sum-throughput maximization with one common access-time slot per SU.
/// Same decoding-set search as solve_stora; the inner energy split becomes a
/// water-filling step because pinned equal times couple the SU rates.
SchemeResult solve_eta(const ChannelState& channels, const ScenarioConfig& config,
                       const SolverTolerances& tol = {});

/// High-SNR closed form of the common access slot: exp(-nu) times the
/// geometric mean of the received SNR-energies. Diagnostic cross-check of the
/// exact bisection root; caller asserts min(gamma_ih*e_ih) >> 1.
double eta_teq_high_snr(const std::vector<double>& e_sh,
                        const std::vector<double>& gamma_ih, double nu);

/// Max-min throughput: maximizes the minimum per-SU rate. At any optimum with
/// a positive minimum, every SU ends at exactly the same rate.
SchemeResult solve_mtm(const ChannelState& channels, const ScenarioConfig& config,
                       const SolverTolerances& tol = {});

/// Access time of one SU from the max-min stationarity system:
/// gamma_ih * e_ih / x*(nu / rho_i).
double mtm_access_time(double e_ih, double gamma_ih, double nu, double rho_i);

/// Proportional time allocation: access time proportional to the SU's relay
/// SNR contribution (decode-relay-then-access). Outer golden-section search
/// on the proportionality constant.
SchemeResult solve_pta(const ChannelState& channels, const ScenarioConfig& config,
                       const SolverTolerances& tol = {});

} // namespace wpccrn

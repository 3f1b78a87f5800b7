#pragma once

#include "wpccrn/core_math.hpp"
#include "wpccrn/types.hpp"

#include <optional>
#include <vector>

// Shared machinery for the per-decoding-set convex allocation problem. All
// four schemes and the selection baselines reduce to searches over the
// harvesting/relaying durations (t_e, t_0) with scheme-specific inner
// allocations, so the geometry of that search lives here.
namespace wpccrn {

struct FixedSetContext {
    int n = 0;
    int cutoff = 0;
    double rbar = 0.0;     // target primary rate
    double gamma_p = 0.0;  // primary direct SNR
    double q1 = 0.0;       // ln(1 + gamma_p)
    double q2 = 0.0;       // decoding coefficient of the cutoff-th strongest SU
    double a = 1.0;        // 1 + gamma_p

    std::vector<int> decoders;      // decoding set, strongest PT-link first
    std::vector<char> is_decoder;   // by SU index
    std::vector<double> gamma_ip, gamma_ih, theta;
    std::vector<double> budget_rate;   // (p_hap + theta_i): budget per unit t_e
    std::vector<int> relay_candidates; // decoders allowed to relay, by ascending
                                       // gamma_ih/gamma_ip
    double relay_capacity_rate = 0.0;  // sum gamma_ip*budget over candidates
    double access_rate_all = 0.0;      // sum gamma_ih*budget over all SUs

    static FixedSetContext make(const ChannelState& channels, const ScenarioConfig& config,
                                int cutoff, const std::vector<char>* relay_mask = nullptr);

    // Residual primary data after the harvesting phase.
    double residual(double t_e) const { return rbar - q1 * t_e; }

    // Smallest relaying duration satisfying the decoding constraint.
    double t0_lower(double t_e) const {
        double d = residual(t_e);
        return d > 0.0 ? d / q2 : 0.0;
    }
    double t0_upper(double t_e) const { return 0.5 * (1.0 - t_e); }

    // Relay SNR-energy sum needed to close the primary-rate gap; +inf when
    // t_0 cannot carry the residual, 0 when the direct link already covers it.
    double required_relay_energy(double t_e, double t_0) const;

    // Relay-unit capacity of the candidate set at the given t_e.
    double relay_capacity(double t_e) const { return relay_capacity_rate * t_e; }

    // Smallest feasible t_0 at this t_e: decoding bound plus the point where
    // the required relay energy drops to the candidates' capacity.
    double t0_feasible_lower(double t_e) const;

    // Fill the required relay energy greedily in relay-priority order.
    // Returns per-SU relay units q_i = gamma_ip * E_ip and the remaining
    // access SNR-energy sum G = sum gamma_ih * E_ih.
    struct GreedyFill {
        std::vector<double> relay_units; // by SU index
        double access_sum = 0.0;
        int fractional = -1; // SU index of the single partially-used relayer
    };
    GreedyFill greedy_fill(double t_e, double required) const;
};

// Feasible interval of harvesting durations for this decoding set, or nullopt
// when the target primary rate is unreachable (dense scan + edge bisection;
// the underlying feasible set is convex so its projection is an interval).
std::optional<std::pair<double, double>> feasible_te_interval(const FixedSetContext& ctx);

// Residuals of the optimality system, recomputed from scratch so tests can
// audit a result independently of the solver that produced it.
struct KktResiduals {
    double primary_rate_rel = 0.0; // binding primary-rate constraint
    double budget_rel = 0.0;       // binding per-SU energy budgets
    double total_time_rel = 0.0;   // binding slot budget
    double lemma_ratio_rel = 0.0;  // equal access SNR across transmitting SUs
    double kkt_access_energy = 0.0;
    double kkt_relay_energy = 0.0;
    double kkt_access_time = 0.0;
    double kkt_relay_time = 0.0;
    int fractional_relayers = 0;
    bool relay_prefix_ok = true; // relayers form a prefix of the priority order
};

KktResiduals kkt_residuals(const SchemeResult& result, const ChannelState& channels,
                           const ScenarioConfig& config);

} // namespace wpccrn

#pragma once

#include "wpccrn/scenario.hpp"
#include "wpccrn/types.hpp"

// Hand-built instances with unit noise and unit SNR gap so the solver
// coefficients can be read straight off the channel gains:
//   gamma_p = h_p * p_primary, gamma_ip = eta * h_hs * h_sp,
//   gamma_ih = eta * h_hs * h_sh, theta = p_primary * h_ps / h_hs.
namespace wpccrn::testing {

inline ScenarioConfig unit_config(int n_su, double target_rate) {
    ScenarioConfig cfg;
    cfg.n_su = n_su;
    cfg.p_primary = 1.0;
    cfg.p_hap = 0.1;
    cfg.noise = 1.0;
    cfg.eta = 1.0;
    cfg.snr_gap = 1.0;
    cfg.target_primary_rate = target_rate;
    return cfg;
}

// Two-SU instance with gamma_p = 0.5, gamma_ip = [2, 1], gamma_ih = [1, 3],
// theta = [0.01, 0.01], p_hap = 0.1, target rate 0.4. Both SUs decode easily
// (strong PT links).
inline ChannelState two_su_instance() {
    ChannelState ch;
    ch.h_p = 0.5;
    ch.h_ps = {1.0, 0.9};
    ch.h_hs = {100.0, 90.0};
    ch.h_sp = {2.0 / 100.0, 1.0 / 90.0};
    ch.h_sh = {1.0 / 100.0, 3.0 / 90.0};
    // theta = h_ps / h_hs = 0.01 for both
    return ch;
}

inline ScenarioConfig two_su_config() { return unit_config(2, 0.4); }

// Strong direct link: the primary target is met by the harvesting phase
// alone at any reasonable t_e, so the optimum needs no relaying.
inline ChannelState strong_direct_instance() {
    ChannelState ch;
    ch.h_p = 10.0;
    ch.h_ps = {1.0};
    ch.h_hs = {10.0};
    ch.h_sp = {0.1};
    ch.h_sh = {0.2};
    return ch;
}

inline ScenarioConfig paper_config(int n_su = 4) {
    ScenarioConfig cfg; // defaults are the reference parameters
    cfg.n_su = n_su;
    return cfg;
}

} // namespace wpccrn::testing

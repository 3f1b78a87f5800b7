#pragma once

#include "wpccrn/rng.hpp"
#include "wpccrn/types.hpp"

namespace wpccrn {

/// PT at the origin, PR at (d_pt_pr, 0), HAP collinear at the midpoint.
/// SUs are uniform on the disk of radius su_radius around the HAP.
/// Link distances are clamped below at 0.5 m to keep path loss finite.
Geometry place_users(const ScenarioConfig& config, CounterRng& rng);

/// Composite gains: unit-mean exponential fading times d^(-pathloss_exp),
/// independent across links. Draw order is fixed (h_p, then per SU
/// h_ps, h_sp, h_hs, h_sh) so a stream replays bit-identically.
ChannelState draw_channels(const Geometry& geometry, const ScenarioConfig& config,
                           CounterRng& rng);

/// Convenience: placement + fading for realization `index` under the
/// documented stream-splitting convention.
ChannelState make_realization(const ScenarioConfig& config, std::uint64_t index);

/// gamma_p, gamma_ip, gamma_ih, theta, Q1 and Q2 for the given decoding-set
/// cutoff (1-based size; Q2 uses the cutoff-th largest PT->SU gain).
DerivedCoefficients derive_coefficients(const ChannelState& channels,
                                        const ScenarioConfig& config, int decoding_cutoff);

/// SU indices sorted by descending PT->SU gain; the cutoff-k decoding set is
/// the first k entries.
std::vector<int> decoding_order(const ChannelState& channels);

/// Energy harvested by SU i over a window of length t_e [J].
double harvested_energy(int i, double t_e, const ChannelState& channels,
                        const ScenarioConfig& config);

/// Overall primary throughput under cooperation for the given allocation.
double primary_coop_rate(const Allocation& allocation, const ChannelState& channels,
                         const ScenarioConfig& config, const DecodingSet& decoding_set);

/// Perspective-function rate t_i * ln(1 + gamma_ih * e_ih / t_i); continuous
/// extension 0 at t_i = 0.
double su_rate(double t_i, double e_ih, double gamma_ih);

/// Decoding test for SU i at the given phase durations.
bool check_decoding(int i, double t_0, double t_e, const ChannelState& channels,
                    const ScenarioConfig& config);

} // namespace wpccrn

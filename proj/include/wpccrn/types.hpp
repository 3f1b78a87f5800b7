#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace wpccrn {

// Static network parameters. Powers and noise are linear units (Watts,
// Watts/Hz); dBm/dB conversions happen once at config load.
struct ScenarioConfig {
    int n_su = 4;
    double p_primary = 0.1;  // primary transmitter power P_p [W]
    double p_hap = 0.1;      // HAP energy-broadcast power P_e [W]
    double noise = 1e-10;    // noise power N_0 [W/Hz]
    double eta = 0.5;        // harvesting efficiency, (0, 1]
    double snr_gap = 7.5857757502918377; // SNR gap Gamma (linear)
    double pathloss_exp = 3.0;
    double d_pt_pr = 50.0;   // PT-PR distance [m]
    double su_radius = 10.0; // SU placement radius around the HAP [m]
    double target_primary_rate = 1.5; // [nats/s/Hz], slot normalized to T = 1
    std::uint64_t rng_seed = 1;

    void validate() const {
        if (n_su < 1) throw std::invalid_argument("n_su must be >= 1");
        if (!(p_primary > 0.0) || !(p_hap > 0.0) || !(noise > 0.0))
            throw std::invalid_argument("powers and noise must be > 0");
        if (!(eta > 0.0) || eta > 1.0) throw std::invalid_argument("eta must be in (0, 1]");
        if (snr_gap < 1.0) throw std::invalid_argument("snr_gap must be >= 1 (linear)");
        if (!(d_pt_pr > 0.0) || !(su_radius > 0.0))
            throw std::invalid_argument("distances must be > 0");
        if (target_primary_rate < 0.0)
            throw std::invalid_argument("target_primary_rate must be >= 0");
    }
};

// Node geometry expressed as the link distances the gain families need.
struct Geometry {
    double d_pt_pr = 0.0;
    std::vector<double> d_pt_su;  // PT  -> SU_i
    std::vector<double> d_su_pr;  // SU_i -> PR
    std::vector<double> d_hap_su; // HAP <-> SU_i (reciprocal distance)
};

// One fading realization: composite channel power gains (fading x path loss).
struct ChannelState {
    double h_p = 0.0;          // PT -> PR
    std::vector<double> h_ps;  // PT -> SU_i
    std::vector<double> h_sp;  // SU_i -> PR
    std::vector<double> h_hs;  // HAP -> SU_i
    std::vector<double> h_sh;  // SU_i -> HAP

    int n() const { return static_cast<int>(h_ps.size()); }
};

// Per-realization coefficients every solver consumes.
struct DerivedCoefficients {
    double gamma_p = 0.0;            // primary direct SNR
    double q1 = 0.0;                 // ln(1 + gamma_p)
    double q2 = 0.0;                 // decoding-rate coefficient at the cutoff
    std::vector<double> gamma_ip;    // relaying coefficient per SU
    std::vector<double> gamma_ih;    // access coefficient per SU
    std::vector<double> theta;       // harvested-from-primary bonus per SU
};

// A full decision. Energies are the normalized variables E / (eta * h_hs),
// physical powers are recovered as P_ih = eta*h_hs*E_ih/t_i and
// P_ip = eta*h_hs*E_ip/t_0.
struct Allocation {
    double t_e = 0.0;           // energy-harvesting duration
    double t_0 = 0.0;           // reception/relaying duration (each phase)
    std::vector<double> t;      // per-SU access time
    std::vector<double> e_sh;   // per-SU access energy (normalized)
    std::vector<double> e_sp;   // per-SU relaying energy (normalized)

    double access_time() const {
        double s = 0.0;
        for (double ti : t) s += ti;
        return s;
    }
};

// Lagrange multipliers at convergence plus the proportional-time constant.
struct DualState {
    double lambda = 0.0;        // primary-rate constraint
    double kappa = 0.0;         // decoding constraint
    double nu = 0.0;            // total-time constraint
    std::vector<double> mu;     // per-SU energy neutrality
    std::vector<double> rho;    // per-SU rate constraints (max-min only)
    double zeta = 0.0;          // access-time / relay-contribution ratio (PTA)
};

struct DecodingSet {
    std::vector<int> members;   // SU indices, strongest PT-link first
    int cutoff = 0;             // |S_D| under the sorted-gain parameterization

    bool contains(int i) const {
        for (int m : members)
            if (m == i) return true;
        return false;
    }
};

enum class Scheme { STORA, ETA, MTM, PTA, BSS, RSS_S, RSS_M };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

// Outcome of one scheme on one realization.
struct SchemeResult {
    bool feasible = false;
    bool converged = true;      // false flags a solver failure, never dropped
    Allocation allocation;
    DecodingSet decoding_set;
    std::vector<double> su_throughputs;
    double sum_throughput = 0.0;
    double primary_rate = 0.0;
    DualState duals;
    int iterations = 0;
};

// Instance of the generic split-a-demand allocation problem: weights w_i on
// the kept side, per-user capacity r_i, total demand s on the spent side.
struct GreedyInstance {
    std::vector<double> weights;
    std::vector<double> capacities;
    double demand = 0.0;
};

} // namespace wpccrn

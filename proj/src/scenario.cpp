#include "wpccrn/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace wpccrn {

namespace {
constexpr double kMinLinkDistance = 0.5; // [m], avoids singular path loss
constexpr double kTwoPi = 6.283185307179586;
} // namespace

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::STORA: return "stora";
        case Scheme::ETA: return "eta";
        case Scheme::MTM: return "mtm";
        case Scheme::PTA: return "pta";
        case Scheme::BSS: return "bss";
        case Scheme::RSS_S: return "rss-s";
        case Scheme::RSS_M: return "rss-m";
    }
    return "?";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "stora") return Scheme::STORA;
    if (name == "eta") return Scheme::ETA;
    if (name == "mtm") return Scheme::MTM;
    if (name == "pta") return Scheme::PTA;
    if (name == "bss") return Scheme::BSS;
    if (name == "rss-s" || name == "rss_s") return Scheme::RSS_S;
    if (name == "rss-m" || name == "rss_m") return Scheme::RSS_M;
    throw std::invalid_argument("unknown scheme: " + name);
}

Geometry place_users(const ScenarioConfig& config, CounterRng& rng) {
    config.validate();
    Geometry g;
    g.d_pt_pr = std::max(config.d_pt_pr, kMinLinkDistance);

    const double hap_x = config.d_pt_pr / 2.0; // collinear midpoint
    const double pr_x = config.d_pt_pr;

    g.d_pt_su.resize(config.n_su);
    g.d_su_pr.resize(config.n_su);
    g.d_hap_su.resize(config.n_su);
    for (int i = 0; i < config.n_su; ++i) {
        double r = config.su_radius * std::sqrt(rng.uniform());
        double ang = kTwoPi * rng.uniform();
        double x = hap_x + r * std::cos(ang);
        double y = r * std::sin(ang);
        g.d_hap_su[i] = std::max(r, kMinLinkDistance);
        g.d_pt_su[i] = std::max(std::hypot(x, y), kMinLinkDistance);
        g.d_su_pr[i] = std::max(std::hypot(x - pr_x, y), kMinLinkDistance);
    }
    return g;
}

ChannelState draw_channels(const Geometry& geometry, const ScenarioConfig& config,
                           CounterRng& rng) {
    const double beta = config.pathloss_exp;
    auto gain = [&](double d) { return std::pow(d, -beta); };

    ChannelState ch;
    const int n = static_cast<int>(geometry.d_pt_su.size());
    ch.h_p = rng.exponential() * gain(geometry.d_pt_pr);
    ch.h_ps.resize(n);
    ch.h_sp.resize(n);
    ch.h_hs.resize(n);
    ch.h_sh.resize(n);
    for (int i = 0; i < n; ++i) {
        ch.h_ps[i] = rng.exponential() * gain(geometry.d_pt_su[i]);
        ch.h_sp[i] = rng.exponential() * gain(geometry.d_su_pr[i]);
        ch.h_hs[i] = rng.exponential() * gain(geometry.d_hap_su[i]);
        ch.h_sh[i] = rng.exponential() * gain(geometry.d_hap_su[i]);
    }
    return ch;
}

ChannelState make_realization(const ScenarioConfig& config, std::uint64_t index) {
    CounterRng placement_rng(config.rng_seed, index * 8 + 0);
    CounterRng fading_rng(config.rng_seed, index * 8 + 1);
    Geometry geom = place_users(config, placement_rng);
    return draw_channels(geom, config, fading_rng);
}

std::vector<int> decoding_order(const ChannelState& channels) {
    std::vector<int> order(channels.n());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return channels.h_ps[a] > channels.h_ps[b];
    });
    return order;
}

DerivedCoefficients derive_coefficients(const ChannelState& channels,
                                        const ScenarioConfig& config, int decoding_cutoff) {
    const int n = channels.n();
    if (decoding_cutoff < 1 || decoding_cutoff > n)
        throw std::invalid_argument("decoding_cutoff out of range");

    const double gn = config.snr_gap * config.noise;
    DerivedCoefficients d;
    d.gamma_p = channels.h_p * config.p_primary / gn;
    d.q1 = std::log1p(d.gamma_p);

    d.gamma_ip.resize(n);
    d.gamma_ih.resize(n);
    d.theta.resize(n);
    for (int i = 0; i < n; ++i) {
        d.gamma_ip[i] = config.eta * channels.h_hs[i] * channels.h_sp[i] / gn;
        d.gamma_ih[i] = config.eta * channels.h_hs[i] * channels.h_sh[i] / gn;
        d.theta[i] = channels.h_hs[i] > 0.0
                         ? config.p_primary * channels.h_ps[i] / channels.h_hs[i]
                         : std::numeric_limits<double>::infinity();
    }

    std::vector<int> order = decoding_order(channels);
    d.q2 = std::log1p(channels.h_ps[order[decoding_cutoff - 1]] * config.p_primary / gn);
    return d;
}

double harvested_energy(int i, double t_e, const ChannelState& channels,
                        const ScenarioConfig& config) {
    if (t_e < 0.0) throw std::invalid_argument("t_e must be >= 0");
    return config.eta *
           (config.p_hap * channels.h_hs[i] + config.p_primary * channels.h_ps[i]) * t_e;
}

double primary_coop_rate(const Allocation& allocation, const ChannelState& channels,
                         const ScenarioConfig& config, const DecodingSet& decoding_set) {
    const double gn = config.snr_gap * config.noise;
    const double gamma_p = channels.h_p * config.p_primary / gn;

    // Relay SNR: sum over decoding-set members of h_sp * P_ip / (Gamma N0),
    // with the physical power recovered from the normalized relay energy.
    double relay_snr = 0.0;
    if (allocation.t_0 > 0.0) {
        for (int i : decoding_set.members) {
            double e_ip = allocation.e_sp.empty() ? 0.0 : allocation.e_sp[i];
            if (e_ip <= 0.0) continue;
            relay_snr += config.eta * channels.h_hs[i] * channels.h_sp[i] * e_ip /
                         (gn * allocation.t_0);
        }
    }
    double rate = allocation.t_e * std::log1p(gamma_p);
    if (allocation.t_0 > 0.0) rate += allocation.t_0 * std::log1p(gamma_p + relay_snr);
    return rate;
}

double su_rate(double t_i, double e_ih, double gamma_ih) {
    if (t_i < 0.0 || e_ih < 0.0) throw std::invalid_argument("su_rate: negative argument");
    if (t_i <= 0.0) return 0.0;
    double x = gamma_ih * e_ih / t_i;
    if (!(x > 0.0)) return 0.0;
    return t_i * std::log1p(x);
}

bool check_decoding(int i, double t_0, double t_e, const ChannelState& channels,
                    const ScenarioConfig& config) {
    const double gn = config.snr_gap * config.noise;
    double q1 = std::log1p(channels.h_p * config.p_primary / gn);
    double residual = config.target_primary_rate - t_e * q1;
    if (residual <= 0.0) return true;
    double link = std::log1p(channels.h_ps[i] * config.p_primary / gn);
    return t_0 * link >= residual;
}

} // namespace wpccrn

#include "wpccrn/oracle.hpp"

#include "wpccrn/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace wpccrn {

namespace {

constexpr double kFeasSlack = 1e-9;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

enum class OracleKind { SumRate, MinRate, EqualTime, Proportional };

// Every gridded dimension is a fraction in [0, 1]; refinement shrinks the
// per-dimension window around the incumbent. Layout:
//   [0] t_e, [1] t_0 as a share of (1 - t_e)/2, [2 .. 2+n) relay splits,
//   then n-1 access-time shares (sum/min), or one common-slot share
//   (equal-time), or one proportionality share (proportional-time).
struct OracleRunner {
    const ChannelState* ch;
    const ScenarioConfig* cfg;
    OracleKind kind;
    int n;

    double gamma_p, q1;
    std::vector<double> gamma_ip, gamma_ih, theta;

    std::vector<int> points;
    std::vector<std::pair<double, double>> window;

    double best = 0.0;
    bool any = false;
    std::vector<double> arg;

    OracleRunner(const ChannelState& channels, const ScenarioConfig& config,
                 OracleKind k)
        : ch(&channels), cfg(&config), kind(k), n(channels.n()) {
        if (n > 3) throw std::invalid_argument("oracle: size guard, N <= 3 only");
        config.validate();
        DerivedCoefficients d = derive_coefficients(channels, config, 1);
        gamma_p = d.gamma_p;
        q1 = d.q1;
        gamma_ip = d.gamma_ip;
        gamma_ih = d.gamma_ih;
        theta = d.theta;
    }

    int extra_dims() const {
        switch (kind) {
            case OracleKind::SumRate:
            case OracleKind::MinRate: return n - 1;
            case OracleKind::EqualTime:
            case OracleKind::Proportional: return 1;
        }
        return 0;
    }

    void setup(const GridSpec& grid) {
        int base = std::max(5, static_cast<int>(std::lround(1.0 / grid.resolution)) + 1);
        int split_pts = std::max(5, base / 2 + 1);
        if (n == 3) { // keep the 7-dimensional scan tractable
            base = std::min(base, 15);
            split_pts = std::min(split_pts, 9);
        }
        int total = 2 + n + extra_dims();
        points.assign(total, base);
        for (int i = 0; i < n; ++i) points[2 + i] = split_pts;
        window.assign(total, {0.0, 1.0});
        arg.assign(total, 0.0);
    }

    void refine() {
        // `arg` already holds absolute fractions; shrink each window 10x
        // around it.
        for (size_t d = 0; d < window.size(); ++d) {
            double range = window[d].second - window[d].first;
            double center = arg[d];
            double half = 0.05 * range;
            window[d] = {std::max(0.0, center - half), std::min(1.0, center + half)};
            if (window[d].second < window[d].first) window[d].second = window[d].first;
        }
    }

    double evaluate(const std::vector<double>& f) const {
        double t_e = f[0];
        double t0_max = 0.5 * (1.0 - t_e);
        if (t0_max < 0.0) return kNegInf;
        double t_0 = f[1] * t0_max;
        double t_a = 1.0 - t_e - 2.0 * t_0;
        if (t_a < -1e-12) return kNegInf;
        if (t_a < 0.0) t_a = 0.0;

        double relay = 0.0;
        double e_sh[3], e_sp[3];
        for (int i = 0; i < n; ++i) {
            double budget = (cfg->p_hap + theta[i]) * t_e;
            bool relay_ok = gamma_ip[i] > 0.0 && check_decoding(i, t_0, t_e, *ch, *cfg);
            e_sp[i] = relay_ok ? f[2 + i] * budget : 0.0;
            e_sh[i] = budget - e_sp[i];
            relay += gamma_ip[i] * e_sp[i];
        }

        double rate = t_e * q1;
        if (t_0 > 0.0) rate += t_0 * std::log1p(gamma_p + (relay > 0.0 ? relay / t_0 : 0.0));
        if (rate < cfg->target_primary_rate - kFeasSlack) return kNegInf;

        switch (kind) {
            case OracleKind::SumRate:
            case OracleKind::MinRate: {
                double t[3] = {0.0, 0.0, 0.0};
                if (n == 1) {
                    t[0] = t_a;
                } else if (n == 2) {
                    t[0] = f[2 + n] * t_a;
                    t[1] = t_a - t[0];
                } else {
                    t[0] = f[2 + n] * t_a;
                    t[1] = f[3 + n] * (t_a - t[0]);
                    t[2] = t_a - t[0] - t[1];
                }
                double sum = 0.0, mn = std::numeric_limits<double>::infinity();
                for (int i = 0; i < n; ++i) {
                    double r = su_rate(t[i], e_sh[i], gamma_ih[i]);
                    sum += r;
                    mn = std::min(mn, r);
                }
                return kind == OracleKind::SumRate ? sum : mn;
            }
            case OracleKind::EqualTime: {
                double t_eq = f[2 + n] * t_a / n;
                double sum = 0.0;
                for (int i = 0; i < n; ++i) sum += su_rate(t_eq, e_sh[i], gamma_ih[i]);
                return sum;
            }
            case OracleKind::Proportional: {
                if (relay <= 0.0) return 0.0; // decode-relay-then-access: no access
                double zeta = f[2 + n] * t_a / relay;
                double sum = 0.0;
                for (int i = 0; i < n; ++i) {
                    double t_i = zeta * gamma_ip[i] * e_sp[i];
                    sum += su_rate(t_i, e_sh[i], gamma_ih[i]);
                }
                return sum;
            }
        }
        return kNegInf;
    }

    void scan(int dim, std::vector<double>& f) {
        if (dim == static_cast<int>(points.size())) {
            double v = evaluate(f);
            if (v == kNegInf) return;
            if (!any || v > best) {
                best = v;
                any = true;
                arg = f;
            }
            return;
        }
        int pts = points[dim];
        auto [lo, hi] = window[dim];
        for (int k = 0; k < pts; ++k) {
            double frac = pts > 1 ? static_cast<double>(k) / (pts - 1) : 0.5;
            f[dim] = lo + (hi - lo) * frac;
            scan(dim + 1, f);
        }
    }

    double run(const GridSpec& grid) {
        grid.validate();
        setup(grid);
        for (int round = 0; round <= grid.refine_rounds; ++round) {
            if (round > 0) {
                if (!any) break;
                refine();
            }
            std::vector<double> f(points.size(), 0.0);
            // reset window-relative bookkeeping: `arg` stores absolute fracs
            scan(0, f);
        }
        return any ? best : 0.0;
    }
};

} // namespace

double oracle_stora(const ChannelState& channels, const ScenarioConfig& config,
                    const GridSpec& grid) {
    OracleRunner r(channels, config, OracleKind::SumRate);
    return r.run(grid);
}

double oracle_eta(const ChannelState& channels, const ScenarioConfig& config,
                  const GridSpec& grid) {
    OracleRunner r(channels, config, OracleKind::EqualTime);
    return r.run(grid);
}

double oracle_mtm(const ChannelState& channels, const ScenarioConfig& config,
                  const GridSpec& grid) {
    OracleRunner r(channels, config, OracleKind::MinRate);
    return r.run(grid);
}

double oracle_pta(const ChannelState& channels, const ScenarioConfig& config,
                  const GridSpec& grid) {
    OracleRunner r(channels, config, OracleKind::Proportional);
    return r.run(grid);
}

} // namespace wpccrn

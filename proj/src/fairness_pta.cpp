#include "wpccrn/fairness.hpp"

#include "wpccrn/fixed_set.hpp"
#include "wpccrn/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wpccrn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-candidate throughput as a function of its relay units q (E_ip scaled by
// gamma_ip) under the proportional-access rule t_i = zeta * q:
//   f(q) = zeta*q*ln(1 + x),  x = (a_i - b_i q) / (zeta q),
// with a_i = gamma_ih * budget, b_i = gamma_ih / gamma_ip. Concave, f'(0+) =
// +inf, f'(q_cap) = -b_i < 0, so the per-SU optimum is always interior.
struct PtaSu {
    double a = 0.0;   // gamma_ih * budget
    double b = 0.0;   // gamma_ih / gamma_ip
    double cap = 0.0; // gamma_ip * budget (relay units at E_ih = 0)
};

double pta_marginal(double zeta, const PtaSu& su, double x) {
    return zeta * marginal_rate_time(x) - su.b / (1.0 + x);
}

// Solve f'(q) = v for the SNR x (monotone increasing in x), then q = a/(zeta*x + b).
double pta_snr_at_price(double zeta, const PtaSu& su, double v, double x_seed) {
    if (v <= -su.b) return 0.0; // pinned at full relaying
    double x = x_seed > 0.0 ? x_seed : std::max(su.b / zeta, 1.0);
    for (int it = 0; it < 60; ++it) {
        double g = pta_marginal(zeta, su, x) - v;
        double gp = (zeta * x + su.b) / ((1.0 + x) * (1.0 + x));
        if (!(gp > 0.0)) break;
        double nx = x - g / gp;
        if (!(nx > 0.0)) nx = 0.5 * x;
        if (std::abs(nx - x) <= 1e-13 * (1.0 + x)) {
            x = nx;
            break;
        }
        x = nx;
    }
    return std::max(x, 0.0);
}

struct PtaSplit {
    std::vector<double> q;  // relay units per candidate slot
    std::vector<double> x;  // SNR per candidate slot
    double value = 0.0;
};

// Maximize sum f_i(q_i) subject to sum q_i = target (price bisection; the
// unconstrained optimum is handled by the caller clamping the target).
PtaSplit pta_split_at_target(double zeta, const std::vector<PtaSu>& sus, double target,
                             const std::vector<double>& q_free,
                             const std::vector<double>& x_free, double sum_free) {
    const int m = static_cast<int>(sus.size());
    PtaSplit out;
    out.q.assign(m, 0.0);
    out.x.assign(m, 0.0);
    if (m == 0 || target <= 0.0) return out;

    if (std::abs(target - sum_free) <= 1e-12 * std::max(1.0, sum_free)) {
        out.q = q_free;
        out.x = x_free;
    } else {
        double v_lo, v_hi;
        if (target < sum_free) {
            v_lo = 0.0;
            v_hi = 1.0;
            auto sum_at = [&](double v) {
                double s = 0.0;
                for (int j = 0; j < m; ++j) {
                    double x = pta_snr_at_price(zeta, sus[j], v, x_free[j]);
                    s += sus[j].a / (zeta * x + sus[j].b);
                }
                return s;
            };
            while (sum_at(v_hi) > target && v_hi < 1e12) v_hi *= 4.0;
        } else {
            double b_max = 0.0;
            for (const auto& su : sus) b_max = std::max(b_max, su.b);
            v_lo = -b_max;
            v_hi = 0.0;
        }
        for (int it = 0; it < 90; ++it) {
            double v = 0.5 * (v_lo + v_hi);
            double s = 0.0;
            for (int j = 0; j < m; ++j) {
                double x = pta_snr_at_price(zeta, sus[j], v, x_free[j]);
                out.x[j] = x;
                s += x > 0.0 || v > -sus[j].b ? sus[j].a / (zeta * x + sus[j].b)
                                              : sus[j].cap;
            }
            (s > target ? v_lo : v_hi) = v; // sum decreases in the price
        }
        double v = 0.5 * (v_lo + v_hi);
        for (int j = 0; j < m; ++j) {
            double x = pta_snr_at_price(zeta, sus[j], v, x_free[j]);
            out.x[j] = x;
            out.q[j] = x > 0.0 || v > -sus[j].b ? sus[j].a / (zeta * x + sus[j].b)
                                                : sus[j].cap;
        }
        // Absorb the price-resolution residue into one interior candidate so
        // the targeted demand is met exactly.
        double sum_q = 0.0;
        for (double q : out.q) sum_q += q;
        double deficit = target - sum_q;
        for (int j = 0; j < m && deficit != 0.0; ++j) {
            double nq = out.q[j] + deficit;
            if (nq > 0.0 && nq <= sus[j].cap) {
                out.q[j] = nq;
                out.x[j] = (sus[j].a - sus[j].b * nq) / (zeta * nq);
                if (out.x[j] < 0.0) out.x[j] = 0.0;
                deficit = 0.0;
            }
        }
    }
    for (int j = 0; j < m; ++j)
        if (out.q[j] > 0.0) out.value += zeta * out.q[j] * std::log1p(out.x[j]);
    return out;
}

struct PtaContext {
    const FixedSetContext* ctx = nullptr;
    std::vector<PtaSu> sus; // aligned with ctx->relay_candidates, scaled by t_e
    double cap_e = 0.0;     // total relay-unit budget
};

PtaContext pta_su_data(const FixedSetContext& ctx, double t_e) {
    PtaContext p;
    p.ctx = &ctx;
    for (int i : ctx.relay_candidates) {
        PtaSu su;
        double budget = ctx.budget_rate[i] * t_e;
        su.a = ctx.gamma_ih[i] * budget;
        su.b = ctx.gamma_ih[i] / ctx.gamma_ip[i];
        su.cap = ctx.gamma_ip[i] * budget;
        p.sus.push_back(su);
        p.cap_e += su.cap;
    }
    return p;
}

// Value at (zeta, t_e, t_0): clamp the unconstrained relay-unit total into
// [required, min(energy cap, time cap)] and split at that target.
double pta_point_value(const PtaContext& p, double zeta, double t_e, double t_0,
                       const std::vector<double>& q_free, const std::vector<double>& x_free,
                       double sum_free, PtaSplit* out_split = nullptr,
                       double* out_target = nullptr) {
    const FixedSetContext& ctx = *p.ctx;
    double required = ctx.required_relay_energy(t_e, t_0);
    if (!std::isfinite(required)) return -kInf;
    double t_a = 1.0 - t_e - 2.0 * t_0;
    if (t_a < 0.0) return -kInf;
    double cap = std::min(p.cap_e, zeta > 0.0 ? t_a / zeta : kInf);
    if (required > cap * (1.0 + 1e-12) + 1e-300) return -kInf;

    double target = std::clamp(sum_free, required, cap);
    PtaSplit split = pta_split_at_target(zeta, p.sus, target, q_free, x_free, sum_free);
    if (out_split) *out_split = std::move(split);
    if (out_target) *out_target = target;
    return out_split ? out_split->value
                     : split.value; // note: split moved only when out_split set
}

struct PtaTeResult {
    double value = -kInf;
    double t_0 = 0.0;
};

PtaTeResult pta_te_value(const FixedSetContext& ctx, double zeta, double t_e,
                         double arg_tol) {
    PtaTeResult out;
    PtaContext p = pta_su_data(ctx, t_e);
    if (p.sus.empty()) {
        // No decode-and-relay candidate: only feasible when the direct link
        // alone meets the target; all access time stays zero.
        double lo = ctx.t0_lower(t_e);
        if (ctx.required_relay_energy(t_e, lo) <= 0.0 && lo <= ctx.t0_upper(t_e)) {
            out.value = 0.0;
            out.t_0 = lo;
        }
        return out;
    }

    const int m = static_cast<int>(p.sus.size());
    std::vector<double> q_free(m), x_free(m);
    double sum_free = 0.0;
    for (int j = 0; j < m; ++j) {
        double x = pta_snr_at_price(zeta, p.sus[j], 0.0, 0.0);
        x_free[j] = x;
        q_free[j] = p.sus[j].a / (zeta * x + p.sus[j].b);
        sum_free += q_free[j];
    }

    double lo = ctx.t0_feasible_lower(t_e);
    double hi = ctx.t0_upper(t_e);
    if (!(lo <= hi)) return out;

    // The time cap shrinks the feasible t_0 range further; find the finite
    // window by scanning, then golden-search inside it.
    auto value_at = [&](double t0) {
        return pta_point_value(p, zeta, t_e, t0, q_free, x_free, sum_free);
    };
    constexpr int kScan = 24;
    double f_lo = -kInf, f_hi = -kInf;
    double w_lo = lo, w_hi = hi;
    bool any = false;
    for (int k = 0; k <= kScan; ++k) {
        double t0 = lo + (hi - lo) * k / kScan;
        double v = value_at(t0);
        if (v > -kInf) {
            if (!any) w_lo = t0;
            w_hi = t0;
            any = true;
        }
        if (k == 0) f_lo = v;
        if (k == kScan) f_hi = v;
    }
    (void)f_lo;
    (void)f_hi;
    if (!any) return out;
    // widen half a scan step and clamp back into the valid range
    double step = (hi - lo) / kScan;
    w_lo = std::max(lo, w_lo - step);
    w_hi = std::min(hi, w_hi + step);

    auto guarded = [&](double t0) {
        double v = value_at(t0);
        return v > -kInf ? v : -1e300;
    };
    auto [t0s, v] = golden_section_max(guarded, w_lo, w_hi, arg_tol);
    out.value = v;
    out.t_0 = t0s;
    return out;
}

SchemeResult assemble_pta(const FixedSetContext& ctx, double zeta, double t_e, double t_0) {
    SchemeResult result;
    result.feasible = true;
    result.decoding_set.members = ctx.decoders;
    result.decoding_set.cutoff = ctx.cutoff;
    result.duals.zeta = zeta;
    result.duals.mu.assign(ctx.n, 0.0);

    Allocation& al = result.allocation;
    al.t_e = t_e;
    al.t_0 = t_0;
    al.t.assign(ctx.n, 0.0);
    al.e_sh.assign(ctx.n, 0.0);
    al.e_sp.assign(ctx.n, 0.0);

    for (int i = 0; i < ctx.n; ++i) al.e_sh[i] = ctx.budget_rate[i] * t_e;

    PtaContext p = pta_su_data(ctx, t_e);
    double relay_sum = 0.0;
    if (!p.sus.empty()) {
        const int m = static_cast<int>(p.sus.size());
        std::vector<double> q_free(m), x_free(m);
        double sum_free = 0.0;
        for (int j = 0; j < m; ++j) {
            double x = pta_snr_at_price(zeta, p.sus[j], 0.0, 0.0);
            x_free[j] = x;
            q_free[j] = p.sus[j].a / (zeta * x + p.sus[j].b);
            sum_free += q_free[j];
        }
        PtaSplit split;
        double target = 0.0;
        pta_point_value(p, zeta, t_e, t_0, q_free, x_free, sum_free, &split, &target);
        for (int j = 0; j < m; ++j) {
            int i = ctx.relay_candidates[j];
            double q = split.q[j];
            al.e_sp[i] = q / ctx.gamma_ip[i];
            al.e_sh[i] = ctx.budget_rate[i] * t_e - al.e_sp[i];
            if (al.e_sh[i] < 0.0) al.e_sh[i] = 0.0;
            al.t[i] = zeta * q;
            relay_sum += q;
        }
    }

    result.su_throughputs.resize(ctx.n);
    result.sum_throughput = 0.0;
    for (int i = 0; i < ctx.n; ++i) {
        result.su_throughputs[i] = su_rate(al.t[i], al.e_sh[i], ctx.gamma_ih[i]);
        result.sum_throughput += result.su_throughputs[i];
    }
    double relay_snr = (t_0 > 0.0 && relay_sum > 0.0) ? relay_sum / t_0 : 0.0;
    result.primary_rate = t_e * ctx.q1;
    if (t_0 > 0.0) result.primary_rate += t_0 * std::log1p(ctx.gamma_p + relay_snr);
    return result;
}

} // namespace

SchemeResult solve_pta(const ChannelState& channels, const ScenarioConfig& config,
                       const SolverTolerances& tol) {
    tol.validate();
    SchemeResult best;
    best.feasible = false;
    best.allocation.t.assign(channels.n(), 0.0);
    best.allocation.e_sh.assign(channels.n(), 0.0);
    best.allocation.e_sp.assign(channels.n(), 0.0);
    best.su_throughputs.assign(channels.n(), 0.0);

    double arg_tol = std::max(tol.line_search_tol, 1e-13);
    // The zeta search tolerates a looser inner grid; the final assembly
    // re-solves the incumbent point tightly.
    double inner_tol = std::max(arg_tol, 1e-7);

    for (int cutoff = channels.n(); cutoff >= 1; --cutoff) {
        auto ctx = FixedSetContext::make(channels, config, cutoff);
        auto interval = feasible_te_interval(ctx);
        if (!interval) continue;

        auto zeta_value = [&](double zeta, double* te_out, double* t0_out) {
            if (!(zeta > 0.0)) {
                if (te_out) *te_out = interval->first;
                if (t0_out) *t0_out = 0.0;
                return 0.0;
            }
            auto te_val = [&](double t_e) {
                return pta_te_value(ctx, zeta, t_e, inner_tol).value;
            };
            // The time cap can make parts of the interval infeasible for this
            // zeta; locate the finite window first.
            constexpr int kScan = 16;
            double w_lo = interval->first, w_hi = interval->second;
            bool any = false;
            for (int k = 0; k <= kScan; ++k) {
                double t_e = interval->first +
                             (interval->second - interval->first) * k / kScan;
                if (te_val(t_e) > -kInf) {
                    if (!any) w_lo = t_e;
                    w_hi = t_e;
                    any = true;
                }
            }
            if (!any) return -kInf;
            double step = (interval->second - interval->first) / kScan;
            w_lo = std::max(interval->first, w_lo - step);
            w_hi = std::min(interval->second, w_hi + step);
            auto guarded = [&](double t_e) {
                double v = te_val(t_e);
                return v > -kInf ? v : -1e300;
            };
            auto [te_s, v] = golden_section_max(guarded, w_lo, w_hi, inner_tol);
            if (te_out) *te_out = te_s;
            if (t0_out) *t0_out = pta_te_value(ctx, zeta, te_s, inner_tol).t_0;
            return v;
        };

        // Geometrically expanded bracket for the proportionality constant.
        double zeta_hi = 1.0;
        double zeta_best = 0.0, v_best = -kInf;
        for (int expand = 0; expand < 24; ++expand) {
            auto [zs, v] = golden_section_max(
                [&](double z) { return zeta_value(z, nullptr, nullptr); }, 0.0, zeta_hi,
                std::max(inner_tol * zeta_hi, 1e-12 * zeta_hi));
            zeta_best = zs;
            v_best = v;
            if (zs < 0.95 * zeta_hi || !(v > -kInf)) break;
            zeta_hi *= 8.0;
        }
        if (!(v_best > -kInf)) {
            // Degenerate: feasible only through the direct link with no
            // relay-and-access phase.
            double te_s = interval->second;
            SchemeResult r = assemble_pta(ctx, 0.0, te_s, ctx.t0_lower(te_s));
            if (!best.feasible) best = std::move(r);
            continue;
        }

        double te_s = 0.0, t0_s = 0.0;
        zeta_value(zeta_best, &te_s, &t0_s);
        // Tight re-solve of (t_e, t_0) at the chosen zeta.
        auto te_val_tight = [&](double t_e) {
            return pta_te_value(ctx, zeta_best, t_e, arg_tol).value;
        };
        double span = std::max(1e-3, 1e-2 * (interval->second - interval->first));
        double lo = std::max(interval->first, te_s - span);
        double hi = std::min(interval->second, te_s + span);
        auto guarded = [&](double t_e) {
            double v = te_val_tight(t_e);
            return v > -kInf ? v : -1e300;
        };
        auto [te_t, vt] = golden_section_max(guarded, lo, hi, arg_tol);
        (void)vt;
        t0_s = pta_te_value(ctx, zeta_best, te_t, arg_tol).t_0;

        SchemeResult r = assemble_pta(ctx, zeta_best, te_t, t0_s);
        if (!best.feasible || r.sum_throughput > best.sum_throughput) best = std::move(r);
    }
    return best;
}

} // namespace wpccrn

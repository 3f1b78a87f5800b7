#include "wpccrn/fairness.hpp"

#include "wpccrn/fixed_set.hpp"
#include "wpccrn/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wpccrn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double marginal_relay_time(double a, double y) {
    return std::log(a + y) - y / (a + y);
}

// Energy split for pinned equal times: on the relay-price level c, every
// candidate keeps access SNR x_i = (w_i / c - 1) clamped to its budget and
// relays the rest. The relay sum is strictly increasing in c.
struct EtaSplit {
    std::vector<double> e_sh; // by SU index
    double relay_sum = 0.0;
    double price = 0.0;
};

EtaSplit eta_split_at_price(const FixedSetContext& ctx, double t_e, double t_eq, double c) {
    EtaSplit out;
    out.e_sh.resize(ctx.n);
    out.price = c;
    for (int i = 0; i < ctx.n; ++i) out.e_sh[i] = ctx.budget_rate[i] * t_e;
    for (int i : ctx.relay_candidates) {
        double r_i = ctx.budget_rate[i] * t_e;
        double w = ctx.gamma_ih[i] / ctx.gamma_ip[i];
        double x = c > 0.0 ? std::max(w / c - 1.0, 0.0) : kInf;
        double e_ih = ctx.gamma_ih[i] > 0.0 ? std::min(t_eq * x / ctx.gamma_ih[i], r_i) : 0.0;
        out.e_sh[i] = e_ih;
        out.relay_sum += ctx.gamma_ip[i] * (r_i - e_ih);
    }
    return out;
}

EtaSplit eta_split(const FixedSetContext& ctx, double t_e, double t_eq, double required) {
    if (required <= 0.0) return eta_split_at_price(ctx, t_e, t_eq, 0.0);

    double c_hi = 0.0;
    for (int i : ctx.relay_candidates)
        c_hi = std::max(c_hi, ctx.gamma_ih[i] / ctx.gamma_ip[i]);
    if (c_hi <= 0.0) c_hi = 1.0;

    double lo = 0.0, hi = c_hi;
    for (int it = 0; it < 110; ++it) {
        double c = 0.5 * (lo + hi);
        double sum = eta_split_at_price(ctx, t_e, t_eq, c).relay_sum;
        (sum < required ? lo : hi) = c;
    }
    EtaSplit split = eta_split_at_price(ctx, t_e, t_eq, 0.5 * (lo + hi));

    // Nudge the residual demand onto an interior candidate so the primary
    // rate binds exactly despite the finite price resolution.
    double deficit = required - split.relay_sum;
    if (deficit != 0.0) {
        for (int i : ctx.relay_candidates) {
            double r_i = ctx.budget_rate[i] * t_e;
            double delta_e = deficit / ctx.gamma_ip[i];
            double e_new = split.e_sh[i] - delta_e;
            if (e_new >= 0.0 && e_new <= r_i) {
                split.relay_sum += ctx.gamma_ip[i] * (split.e_sh[i] - e_new);
                split.e_sh[i] = e_new;
                break;
            }
        }
    }
    return split;
}

double eta_point_value(const FixedSetContext& ctx, double t_e, double t_0) {
    double required = ctx.required_relay_energy(t_e, t_0);
    if (!std::isfinite(required)) return -kInf;
    if (required > ctx.relay_capacity(t_e) * (1.0 + 1e-12) + 1e-300) return -kInf;
    double t_a = 1.0 - t_e - 2.0 * t_0;
    if (t_a <= 0.0) return 0.0;
    double t_eq = t_a / ctx.n;

    EtaSplit split = eta_split(ctx, t_e, t_eq, std::min(required, ctx.relay_capacity(t_e)));
    double v = 0.0;
    for (int i = 0; i < ctx.n; ++i)
        v += su_rate(t_eq, split.e_sh[i], ctx.gamma_ih[i]);
    return v;
}

double eta_te_value(const FixedSetContext& ctx, double t_e, double tol, double* best_t0) {
    double lo = ctx.t0_feasible_lower(t_e);
    double hi = ctx.t0_upper(t_e);
    if (!(lo <= hi)) {
        if (best_t0) *best_t0 = 0.0;
        return -kInf;
    }
    auto [t0s, v] = golden_section_max(
        [&](double t0) { return eta_point_value(ctx, t_e, t0); }, lo, hi, tol);
    if (best_t0) *best_t0 = t0s;
    return v;
}

SchemeResult assemble_eta(const FixedSetContext& ctx, double t_e, double t_0) {
    SchemeResult result;
    result.feasible = true;
    result.decoding_set.members = ctx.decoders;
    result.decoding_set.cutoff = ctx.cutoff;

    Allocation& al = result.allocation;
    al.t_e = t_e;
    al.t_0 = t_0;
    double t_a = std::max(1.0 - t_e - 2.0 * t_0, 0.0);
    double t_eq = ctx.n > 0 ? t_a / ctx.n : 0.0;
    al.t.assign(ctx.n, t_eq);
    al.e_sh.assign(ctx.n, 0.0);
    al.e_sp.assign(ctx.n, 0.0);

    double required = std::min(ctx.required_relay_energy(t_e, t_0), ctx.relay_capacity(t_e));
    EtaSplit split = eta_split(ctx, t_e, t_eq, required);

    for (int i = 0; i < ctx.n; ++i) {
        double r_i = ctx.budget_rate[i] * t_e;
        al.e_sh[i] = split.e_sh[i];
        al.e_sp[i] = std::max(r_i - split.e_sh[i], 0.0);
    }

    result.su_throughputs.resize(ctx.n);
    result.sum_throughput = 0.0;
    for (int i = 0; i < ctx.n; ++i) {
        result.su_throughputs[i] = su_rate(t_eq, al.e_sh[i], ctx.gamma_ih[i]);
        result.sum_throughput += result.su_throughputs[i];
    }
    double relay_snr = (t_0 > 0.0 && split.relay_sum > 0.0) ? split.relay_sum / t_0 : 0.0;
    result.primary_rate = t_e * ctx.q1;
    if (t_0 > 0.0) result.primary_rate += t_0 * std::log1p(ctx.gamma_p + relay_snr);

    // Multipliers from the stationarity system at the converged point.
    DualState& du = result.duals;
    du.mu.assign(ctx.n, 0.0);
    if (t_eq > 0.0) {
        double nu_sum = 0.0;
        for (int i = 0; i < ctx.n; ++i) {
            double x_i = ctx.gamma_ih[i] * al.e_sh[i] / t_eq;
            nu_sum += marginal_rate_time(x_i);
        }
        du.nu = nu_sum / ctx.n;
        double y = (t_0 > 0.0 && split.relay_sum > 0.0) ? split.relay_sum / t_0 : 0.0;
        du.lambda = split.relay_sum > 0.0 ? split.price * (ctx.a + y) : 0.0;
        double t0_lb = ctx.t0_feasible_lower(t_e);
        if (t_0 <= t0_lb + std::max(1e-9, 1e-6 * t0_lb) && ctx.q2 > 0.0)
            du.kappa = std::max(
                0.0, (2.0 * du.nu - du.lambda * marginal_relay_time(ctx.a, y)) / ctx.q2);
        for (int i = 0; i < ctx.n; ++i) {
            double x_i = ctx.gamma_ih[i] * al.e_sh[i] / t_eq;
            double access_value = ctx.gamma_ih[i] / (1.0 + x_i);
            double relay_value =
                ctx.is_decoder[i] ? du.lambda * ctx.gamma_ip[i] / (ctx.a + y) : 0.0;
            du.mu[i] = std::max(access_value, relay_value);
        }
    }
    return result;
}

} // namespace

double eta_teq_high_snr(const std::vector<double>& e_sh,
                        const std::vector<double>& gamma_ih, double nu) {
    if (e_sh.size() != gamma_ih.size() || e_sh.empty())
        throw std::invalid_argument("eta_teq_high_snr: bad sizes");
    double log_sum = 0.0;
    for (size_t i = 0; i < e_sh.size(); ++i) {
        double g = gamma_ih[i] * e_sh[i];
        if (g <= 0.0) return 0.0; // one dead SU collapses the geometric mean
        log_sum += std::log(g);
    }
    return std::exp(-nu + log_sum / static_cast<double>(e_sh.size()));
}

SchemeResult solve_eta(const ChannelState& channels, const ScenarioConfig& config,
                       const SolverTolerances& tol) {
    tol.validate();
    SchemeResult best;
    best.feasible = false;
    best.allocation.t.assign(channels.n(), 0.0);
    best.allocation.e_sh.assign(channels.n(), 0.0);
    best.allocation.e_sp.assign(channels.n(), 0.0);
    best.su_throughputs.assign(channels.n(), 0.0);

    double arg_tol = std::max(tol.line_search_tol, 1e-13);
    for (int cutoff = channels.n(); cutoff >= 1; --cutoff) {
        auto ctx = FixedSetContext::make(channels, config, cutoff);
        auto interval = feasible_te_interval(ctx);
        if (!interval) continue;
        auto [te_star, v] = golden_section_max(
            [&](double t_e) { return eta_te_value(ctx, t_e, arg_tol, nullptr); },
            interval->first, interval->second, arg_tol);
        (void)v;
        double t0_star = 0.0;
        eta_te_value(ctx, te_star, std::max(arg_tol * 0.1, 1e-14), &t0_star);
        SchemeResult r = assemble_eta(ctx, te_star, t0_star);
        if (!best.feasible || r.sum_throughput > best.sum_throughput) best = std::move(r);
    }
    return best;
}

} // namespace wpccrn

#include "wpccrn/stora.hpp"

#include "wpccrn/greedy.hpp"
#include "wpccrn/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wpccrn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Marginal of t0 * ln(a + s/t0) with respect to t0, evaluated at y = s/t0.
double marginal_relay_time(double a, double y) {
    return std::log(a + y) - y / (a + y);
}

} // namespace

FixedSetContext FixedSetContext::make(const ChannelState& channels,
                                      const ScenarioConfig& config, int cutoff,
                                      const std::vector<char>* relay_mask) {
    config.validate();
    const int n = channels.n();
    if (n != config.n_su) throw std::invalid_argument("channel/config size mismatch");
    if (cutoff < 1 || cutoff > n) throw std::invalid_argument("cutoff out of range");

    DerivedCoefficients d = derive_coefficients(channels, config, cutoff);
    FixedSetContext ctx;
    ctx.n = n;
    ctx.cutoff = cutoff;
    ctx.rbar = config.target_primary_rate;
    ctx.gamma_p = d.gamma_p;
    ctx.q1 = d.q1;
    ctx.q2 = d.q2;
    ctx.a = 1.0 + d.gamma_p;
    ctx.gamma_ip = d.gamma_ip;
    ctx.gamma_ih = d.gamma_ih;
    ctx.theta = d.theta;

    std::vector<int> order = decoding_order(channels);
    ctx.decoders.assign(order.begin(), order.begin() + cutoff);
    ctx.is_decoder.assign(n, 0);
    for (int i : ctx.decoders) ctx.is_decoder[i] = 1;

    ctx.budget_rate.resize(n);
    for (int i = 0; i < n; ++i) {
        ctx.budget_rate[i] = config.p_hap + ctx.theta[i];
        ctx.access_rate_all += ctx.gamma_ih[i] * ctx.budget_rate[i];
    }

    std::vector<int> priority = relay_priority_order(ctx.gamma_ih, ctx.gamma_ip);
    for (int i : priority) {
        if (!ctx.is_decoder[i]) continue;
        if (!(ctx.gamma_ip[i] > 0.0)) continue; // cannot contribute relay SNR
        if (relay_mask && !(*relay_mask)[i]) continue;
        ctx.relay_candidates.push_back(i);
        ctx.relay_capacity_rate += ctx.gamma_ip[i] * ctx.budget_rate[i];
    }
    return ctx;
}

double FixedSetContext::required_relay_energy(double t_e, double t_0) const {
    double d = residual(t_e);
    if (d <= 0.0) return 0.0;
    if (t_0 <= 0.0) return kInf;
    double u = d / t_0;
    if (u > 700.0) return kInf;
    double s = t_0 * (std::exp(u) - a);
    return s > 0.0 ? s : 0.0;
}

double FixedSetContext::t0_feasible_lower(double t_e) const {
    double lo = t0_lower(t_e);
    double hi = t0_upper(t_e);
    if (lo > hi) return kInf;
    double cap = relay_capacity(t_e);
    if (required_relay_energy(t_e, lo) <= cap) return lo;
    if (required_relay_energy(t_e, hi) > cap) return kInf;
    // required is strictly decreasing in t_0, so the boundary is a root.
    return bisection_root(
        [&](double t0) { return required_relay_energy(t_e, t0) - cap; }, lo, hi, 1e-14);
}

FixedSetContext::GreedyFill FixedSetContext::greedy_fill(double t_e, double required) const {
    GreedyFill fill;
    fill.relay_units.assign(n, 0.0);
    fill.access_sum = access_rate_all * t_e;
    double remaining = required;
    for (int i : relay_candidates) {
        if (remaining <= 0.0) break;
        double cap_i = gamma_ip[i] * budget_rate[i] * t_e;
        double take = std::min(cap_i, remaining);
        fill.relay_units[i] = take;
        fill.access_sum -= (gamma_ih[i] / gamma_ip[i]) * take;
        remaining -= take;
        if (take < cap_i) fill.fractional = i;
    }
    if (fill.access_sum < 0.0) fill.access_sum = 0.0; // guard against roundoff
    return fill;
}

std::optional<std::pair<double, double>> feasible_te_interval(const FixedSetContext& ctx) {
    auto feasible = [&](double t_e) {
        double lo = ctx.t0_lower(t_e);
        double hi = ctx.t0_upper(t_e);
        if (lo > hi) return false;
        return ctx.required_relay_energy(t_e, hi) <= ctx.relay_capacity(t_e);
    };
    if (ctx.rbar <= 0.0) return std::make_pair(0.0, 1.0);

    constexpr int kScan = 256;
    int first = -1, last = -1;
    for (int k = 0; k <= kScan; ++k) {
        double t_e = static_cast<double>(k) / kScan;
        if (feasible(t_e)) {
            if (first < 0) first = k;
            last = k;
        }
    }
    if (first < 0) return std::nullopt;

    double lo = static_cast<double>(first) / kScan;
    double hi = static_cast<double>(last) / kScan;
    if (first > 0) {
        double a = static_cast<double>(first - 1) / kScan, b = lo;
        for (int it = 0; it < 50; ++it) {
            double m = 0.5 * (a + b);
            (feasible(m) ? b : a) = m;
        }
        lo = b;
    }
    if (last < kScan) {
        double a = hi, b = static_cast<double>(last + 1) / kScan;
        for (int it = 0; it < 50; ++it) {
            double m = 0.5 * (a + b);
            (feasible(m) ? a : b) = m;
        }
        hi = a;
    }
    return std::make_pair(lo, hi);
}

namespace {

// Sum-throughput value at (t_e, t_0) once the binding-constraint structure is
// substituted: greedy relay fill, full budgets, access time shared in
// proportion to access SNR-energy.
double stora_point_value(const FixedSetContext& ctx, double t_e, double t_0) {
    double required = ctx.required_relay_energy(t_e, t_0);
    if (!std::isfinite(required)) return -kInf;
    double cap = ctx.relay_capacity(t_e);
    if (required > cap * (1.0 + 1e-12) + 1e-300) return -kInf;

    double t_a = 1.0 - t_e - 2.0 * t_0;
    if (t_a <= 0.0) return 0.0;

    double access = ctx.access_rate_all * t_e;
    double remaining = std::min(required, cap);
    for (int i : ctx.relay_candidates) {
        if (remaining <= 0.0) break;
        double cap_i = ctx.gamma_ip[i] * ctx.budget_rate[i] * t_e;
        double take = std::min(cap_i, remaining);
        access -= (ctx.gamma_ih[i] / ctx.gamma_ip[i]) * take;
        remaining -= take;
    }
    if (access <= 0.0) return 0.0;
    return t_a * std::log1p(access / t_a);
}

double stora_te_value(const FixedSetContext& ctx, double t_e, double t0_tol,
                      double* best_t0 = nullptr) {
    double lo = ctx.t0_feasible_lower(t_e);
    double hi = ctx.t0_upper(t_e);
    if (!(lo <= hi)) {
        if (best_t0) *best_t0 = 0.0;
        return -kInf;
    }
    auto [t0s, v] = golden_section_max(
        [&](double t0) { return stora_point_value(ctx, t_e, t0); }, lo, hi, t0_tol);
    if (best_t0) *best_t0 = t0s;
    return v;
}

// Multiplier recovery from the optimality system at the converged point.
void recover_duals_stora(const FixedSetContext& ctx, SchemeResult& result,
                         const FixedSetContext::GreedyFill& fill, double relay_sum,
                         double access_sum, double t0_at_lower_bound) {
    const Allocation& al = result.allocation;
    DualState& du = result.duals;
    du.mu.assign(ctx.n, 0.0);
    du.rho.clear();

    double t_a = 1.0 - al.t_e - 2.0 * al.t_0;
    if (!(t_a > 0.0) || !(access_sum > 0.0)) return; // degenerate: no access phase

    double x = access_sum / t_a;
    du.nu = marginal_rate_time(x);
    double y = (al.t_0 > 0.0 && relay_sum > 0.0) ? relay_sum / al.t_0 : 0.0;
    double factor = (ctx.a + y) / (1.0 + x);

    // Bracket for lambda from the relay-priority structure.
    double w_full_max = 0.0;
    bool any_full = false, any_relay = false;
    double w_next = kInf;
    int frac = -1;
    for (int i : ctx.relay_candidates) {
        double cap_i = ctx.gamma_ip[i] * ctx.budget_rate[i] * al.t_e;
        double q = fill.relay_units[i];
        double w = ctx.gamma_ih[i] / ctx.gamma_ip[i];
        if (q <= 1e-12 * cap_i) {
            w_next = std::min(w_next, w);
        } else if (q >= cap_i * (1.0 - 1e-12)) {
            any_full = true;
            any_relay = true;
            w_full_max = std::max(w_full_max, w);
        } else {
            frac = i;
            any_relay = true;
        }
    }

    double lam_lo = any_full ? w_full_max * factor : 0.0;
    double lam_hi = std::isfinite(w_next) ? w_next * factor : kInf;

    bool primary_slack = !any_relay && frac < 0 &&
                         result.primary_rate > ctx.rbar + 1e-9 * std::max(1.0, ctx.rbar);
    if (frac >= 0) {
        du.lambda = (ctx.gamma_ih[frac] / ctx.gamma_ip[frac]) * factor;
    } else if (primary_slack) {
        du.lambda = 0.0;
    } else {
        // Multiplier is only bracketed at this degenerate corner; prefer the
        // value closing the relaying-duration stationarity when available.
        double cand = y > 0.0 ? 2.0 * du.nu / marginal_relay_time(ctx.a, y) : lam_lo;
        du.lambda = std::clamp(cand, lam_lo, std::isfinite(lam_hi) ? lam_hi : cand);
    }

    if (t0_at_lower_bound > 0.5 && ctx.q2 > 0.0) {
        du.kappa = std::max(
            0.0, (2.0 * du.nu - du.lambda * marginal_relay_time(ctx.a, y)) / ctx.q2);
    } else {
        du.kappa = 0.0;
    }

    for (int i = 0; i < ctx.n; ++i) {
        double access_value = ctx.gamma_ih[i] / (1.0 + x);
        double relay_value =
            ctx.is_decoder[i] ? du.lambda * ctx.gamma_ip[i] / (ctx.a + y) : 0.0;
        du.mu[i] = std::max(access_value, relay_value);
    }
}

SchemeResult assemble_stora(const FixedSetContext& ctx, double t_e, double t_0) {
    SchemeResult result;
    result.feasible = true;
    result.decoding_set.members = ctx.decoders;
    result.decoding_set.cutoff = ctx.cutoff;

    Allocation& al = result.allocation;
    al.t_e = t_e;
    al.t_0 = t_0;
    al.t.assign(ctx.n, 0.0);
    al.e_sh.assign(ctx.n, 0.0);
    al.e_sp.assign(ctx.n, 0.0);

    double required = std::min(ctx.required_relay_energy(t_e, t_0), ctx.relay_capacity(t_e));
    auto fill = ctx.greedy_fill(t_e, required);

    double relay_sum = 0.0;
    for (int i = 0; i < ctx.n; ++i) {
        double r_i = ctx.budget_rate[i] * t_e;
        double e_ip = fill.relay_units[i] > 0.0 ? fill.relay_units[i] / ctx.gamma_ip[i] : 0.0;
        if (e_ip > r_i) e_ip = r_i;
        al.e_sp[i] = e_ip;
        al.e_sh[i] = r_i - e_ip;
        relay_sum += fill.relay_units[i];
    }

    double t_a = 1.0 - t_e - 2.0 * t_0;
    if (t_a < 0.0) t_a = 0.0;
    double access_sum = 0.0;
    for (int i = 0; i < ctx.n; ++i) access_sum += ctx.gamma_ih[i] * al.e_sh[i];

    if (access_sum > 0.0 && t_a > 0.0) {
        for (int i = 0; i < ctx.n; ++i)
            al.t[i] = t_a * ctx.gamma_ih[i] * al.e_sh[i] / access_sum;
    } else if (ctx.n > 0) {
        // No usable access energy: spread the leftover time so the slot
        // budget still binds; throughputs stay zero either way.
        for (int i = 0; i < ctx.n; ++i) al.t[i] = t_a / ctx.n;
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

    double t0_lb = ctx.t0_feasible_lower(t_e);
    double at_lb = (t_0 <= t0_lb + std::max(1e-9, 1e-6 * t0_lb)) ? 1.0 : 0.0;
    recover_duals_stora(ctx, result, fill, relay_sum, access_sum, at_lb);
    return result;
}

SchemeResult infeasible_result(int n) {
    SchemeResult r;
    r.feasible = false;
    r.converged = true;
    r.allocation.t.assign(n, 0.0);
    r.allocation.e_sh.assign(n, 0.0);
    r.allocation.e_sp.assign(n, 0.0);
    r.su_throughputs.assign(n, 0.0);
    return r;
}

SchemeResult solve_fixed_set_ctx(const FixedSetContext& ctx, const SolverTolerances& tol) {
    auto interval = feasible_te_interval(ctx);
    if (!interval) return infeasible_result(ctx.n);

    double arg_tol = std::max(tol.line_search_tol, 1e-13);
    auto [te_lo, te_hi] = *interval;
    auto [te_star, v] = golden_section_max(
        [&](double t_e) { return stora_te_value(ctx, t_e, arg_tol); }, te_lo, te_hi,
        arg_tol);
    double t0_star = 0.0;
    stora_te_value(ctx, te_star, std::max(arg_tol * 0.1, 1e-14), &t0_star);
    (void)v;
    return assemble_stora(ctx, te_star, t0_star);
}

} // namespace

SchemeResult solve_fixed_set(int cutoff, const ChannelState& channels,
                             const ScenarioConfig& config, const SolverTolerances& tol) {
    tol.validate();
    auto ctx = FixedSetContext::make(channels, config, cutoff);
    return solve_fixed_set_ctx(ctx, tol);
}

SchemeResult solve_fixed_set_masked(int cutoff, const ChannelState& channels,
                                    const ScenarioConfig& config,
                                    const std::vector<char>& relay_mask,
                                    const SolverTolerances& tol) {
    tol.validate();
    auto ctx = FixedSetContext::make(channels, config, cutoff, &relay_mask);
    return solve_fixed_set_ctx(ctx, tol);
}

SchemeResult solve_stora(const ChannelState& channels, const ScenarioConfig& config,
                         const SolverTolerances& tol) {
    tol.validate();
    SchemeResult best = infeasible_result(channels.n());
    for (int cutoff = channels.n(); cutoff >= 1; --cutoff) {
        SchemeResult r = solve_fixed_set(cutoff, channels, config, tol);
        if (!r.feasible) continue;
        if (!best.feasible || r.sum_throughput > best.sum_throughput) best = std::move(r);
    }
    return best;
}

KktResiduals kkt_residuals(const SchemeResult& result, const ChannelState& channels,
                           const ScenarioConfig& config) {
    KktResiduals res;
    if (!result.feasible || result.decoding_set.cutoff < 1) return res;

    const auto& al = result.allocation;
    DerivedCoefficients d = derive_coefficients(channels, config, result.decoding_set.cutoff);
    const int n = channels.n();
    const double a = 1.0 + d.gamma_p;

    double rbar = config.target_primary_rate;
    double rp = primary_coop_rate(al, channels, config, result.decoding_set);
    res.primary_rate_rel = std::abs(rp - rbar) / std::max(rbar, 1e-12);

    double total = al.t_e + 2.0 * al.t_0 + al.access_time();
    res.total_time_rel = std::abs(1.0 - total);

    double relay_sum = 0.0;
    for (int i = 0; i < n; ++i) relay_sum += d.gamma_ip[i] * al.e_sp[i];
    double y = al.t_0 > 0.0 ? relay_sum / al.t_0 : 0.0;

    double x_min = kInf, x_max = 0.0;
    for (int i = 0; i < n; ++i) {
        double r_i = (config.p_hap + d.theta[i]) * al.t_e;
        double gap = std::abs(al.e_sh[i] + al.e_sp[i] - r_i);
        res.budget_rel = std::max(res.budget_rel, gap / std::max(r_i, 1e-300));

        if (al.t[i] > 1e-15 && al.e_sh[i] > 0.0) {
            double x_i = d.gamma_ih[i] * al.e_sh[i] / al.t[i];
            x_min = std::min(x_min, x_i);
            x_max = std::max(x_max, x_i);

            if (!result.duals.mu.empty() && result.duals.mu[i] > 0.0) {
                double r1 = std::abs(d.gamma_ih[i] / (1.0 + x_i) - result.duals.mu[i]) /
                            result.duals.mu[i];
                res.kkt_access_energy = std::max(res.kkt_access_energy, r1);
            }
            if (result.duals.nu > 0.0) {
                double r3 = std::abs(marginal_rate_time(x_i) - result.duals.nu) /
                            result.duals.nu;
                res.kkt_access_time = std::max(res.kkt_access_time, r3);
            }
        }
    }
    if (x_max > 0.0 && std::isfinite(x_min))
        res.lemma_ratio_rel = (x_max - x_min) / x_max;

    // Relay-side stationarity applies where both energy components are free.
    for (int i = 0; i < n; ++i) {
        double r_i = (config.p_hap + d.theta[i]) * al.t_e;
        if (r_i <= 0.0) continue;
        bool frac = al.e_sp[i] > 1e-6 * r_i && al.e_sp[i] < r_i * (1.0 - 1e-6);
        if (frac) ++res.fractional_relayers;
        if (frac && !result.duals.mu.empty() && result.duals.mu[i] > 0.0 &&
            result.duals.lambda > 0.0) {
            double lhs = result.duals.lambda * d.gamma_ip[i] / (a + y);
            double r2 = std::abs(lhs - result.duals.mu[i]) / result.duals.mu[i];
            res.kkt_relay_energy = std::max(res.kkt_relay_energy, r2);
        }
    }

    if (result.duals.lambda > 0.0 && al.t_0 > 0.0 && result.duals.nu > 0.0) {
        double lhs = result.duals.lambda * marginal_relay_time(a, y) +
                     result.duals.kappa * d.q2;
        res.kkt_relay_time = std::abs(lhs - 2.0 * result.duals.nu) / (2.0 * result.duals.nu);
    }

    // Relayers must form a prefix of the ascending-ratio priority order.
    std::vector<int> prio = relay_priority_order(d.gamma_ih, d.gamma_ip);
    bool seen_nonrelayer = false;
    for (int i : prio) {
        if (!result.decoding_set.contains(i)) continue;
        bool relays = al.e_sp[i] > 1e-9;
        if (relays && seen_nonrelayer) res.relay_prefix_ok = false;
        if (!relays) seen_nonrelayer = true;
    }
    return res;
}

} // namespace wpccrn

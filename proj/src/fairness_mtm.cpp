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

// Time needed to carry rate R on SNR-energy g: solves t*ln(1+g/t) = R.
// +inf when R >= g (the rate is unreachable with any amount of time).
double time_for_rate(double R, double g) {
    if (R <= 0.0) return 0.0;
    if (!(g > 0.0) || R >= g) return kInf;
    double M = g / R; // solve x / log1p(x) = M, then t = g / x
    double x;
    if (M < 1.05) {
        x = 2.0 * (M - 1.0) * (1.0 + (M - 1.0) / 3.0);
    } else {
        x = M * std::log(M) + 1.0;
        for (int it = 0; it < 40; ++it) {
            double nx = M * std::log1p(x);
            if (std::abs(nx - x) <= 1e-12 * (1.0 + x)) {
                x = nx;
                break;
            }
            x = nx;
        }
    }
    // Newton polish on F(x) = x - M*log1p(x); F' = 1 - M/(1+x) > 0 near the root.
    for (int it = 0; it < 4; ++it) {
        double f = x - M * std::log1p(x);
        double fp = 1.0 - M / (1.0 + x);
        if (fp <= 0.0) break;
        double nx = x - f / fp;
        if (!(nx > 0.0)) break;
        if (std::abs(nx - x) <= 1e-14 * (1.0 + x)) {
            x = nx;
            break;
        }
        x = nx;
    }
    return g / x;
}

// Equal-rate solution at relay-price level c for fixed (t_e, t_0): relaying
// SUs sit at the access SNR where their marginal relay cost equals c; the
// common rate R then follows from the binding primary-rate constraint; the
// rest pin their full budget and buy time for rate R. Returns the total time
// all N SUs need, which is strictly increasing in c.
struct MtmPoint {
    double rate = 0.0;
    double total_time = kInf;
    std::vector<double> x_relay;   // per candidate-slot SNR (aligned to relayers)
    std::vector<int> relayers;     // SU indices with E_ip > 0
};

MtmPoint mtm_point_at_price(const FixedSetContext& ctx, double t_e, double required,
                            double c) {
    MtmPoint out;
    const int m = static_cast<int>(ctx.relay_candidates.size());
    std::vector<double> x(m), k(m);
    for (int j = 0; j < m; ++j) {
        int i = ctx.relay_candidates[j];
        double v = c * ctx.gamma_ip[i] / ctx.gamma_ih[i];
        x[j] = inverse_energy_per_time_value(v);
        k[j] = x[j] / (ctx.gamma_ih[i] * std::log1p(x[j]));
    }

    // Active-set fixed point: drop candidates whose relay energy would go
    // negative at the implied common rate.
    std::vector<char> active(m, 1);
    double R = 0.0;
    for (int pass = 0; pass < m + 1; ++pass) {
        double num = -required, den = 0.0;
        for (int j = 0; j < m; ++j) {
            if (!active[j]) continue;
            int i = ctx.relay_candidates[j];
            num += ctx.gamma_ip[i] * ctx.budget_rate[i] * t_e;
            den += ctx.gamma_ip[i] * k[j];
        }
        if (den <= 0.0 || num <= 0.0) {
            R = 0.0;
            break;
        }
        R = num / den;
        bool changed = false;
        for (int j = 0; j < m; ++j) {
            if (!active[j]) continue;
            int i = ctx.relay_candidates[j];
            if (ctx.budget_rate[i] * t_e - R * k[j] <= 0.0) {
                active[j] = 0;
                changed = true;
            }
        }
        if (!changed) break;
    }
    if (!(R > 0.0)) {
        out.rate = 0.0;
        out.total_time = 0.0;
        return out;
    }

    double total = 0.0;
    for (int j = 0; j < m; ++j) {
        int i = ctx.relay_candidates[j];
        if (active[j]) {
            total += R / std::log1p(x[j]);
            out.relayers.push_back(i);
            out.x_relay.push_back(x[j]);
        }
    }
    std::vector<char> relaying(ctx.n, 0);
    for (int i : out.relayers) relaying[i] = 1;
    for (int i = 0; i < ctx.n; ++i) {
        if (relaying[i]) continue;
        total += time_for_rate(R, ctx.gamma_ih[i] * ctx.budget_rate[i] * t_e);
    }
    out.rate = R;
    out.total_time = total;
    return out;
}

// No-relaying variant: every SU pins its full budget; the common rate comes
// from the time budget alone (monotone bisection on R).
double mtm_rate_no_relay(const FixedSetContext& ctx, double t_e, double t_a) {
    double g_min = kInf;
    for (int i = 0; i < ctx.n; ++i)
        g_min = std::min(g_min, ctx.gamma_ih[i] * ctx.budget_rate[i] * t_e);
    if (!(g_min > 0.0) || !(t_a > 0.0)) return 0.0;

    auto total_time = [&](double R) {
        double total = 0.0;
        for (int i = 0; i < ctx.n; ++i) {
            total += time_for_rate(R, ctx.gamma_ih[i] * ctx.budget_rate[i] * t_e);
            if (!std::isfinite(total)) return kInf;
        }
        return total;
    };
    double lo = 0.0, hi = g_min * (1.0 - 1e-12);
    if (total_time(hi) <= t_a) return hi;
    for (int it = 0; it < 100; ++it) {
        double R = 0.5 * (lo + hi);
        (total_time(R) <= t_a ? lo : hi) = R;
    }
    return lo;
}

struct MtmInner {
    double rate = 0.0;
    double price = 0.0;
    bool any_relay = false;
};

MtmInner mtm_point_value(const FixedSetContext& ctx, double t_e, double t_0) {
    MtmInner out;
    double required = ctx.required_relay_energy(t_e, t_0);
    if (!std::isfinite(required)) return out;
    double cap = ctx.relay_capacity(t_e);
    if (required > cap * (1.0 + 1e-12) + 1e-300) return out;
    double t_a = 1.0 - t_e - 2.0 * t_0;
    if (!(t_a > 0.0)) return out;

    if (required <= 0.0) {
        out.rate = mtm_rate_no_relay(ctx, t_e, t_a);
        return out;
    }
    if (required >= cap * (1.0 - 1e-12)) return out; // relayers drained: min rate 0

    out.any_relay = true;
    // Total time is strictly increasing in the relay price c; bisect in log
    // space for the level where the slot budget binds.
    double w_min = kInf, w_max = 0.0;
    for (int i : ctx.relay_candidates) {
        double w = ctx.gamma_ih[i] / ctx.gamma_ip[i];
        w_min = std::min(w_min, w);
        w_max = std::max(w_max, w);
    }
    double lo = std::log(w_min) - 45.0, hi = std::log(w_max) + 45.0;
    if (mtm_point_at_price(ctx, t_e, required, std::exp(lo)).total_time > t_a) {
        out.rate = 0.0; // even the cheapest price cannot fit the slot
        return out;
    }
    if (mtm_point_at_price(ctx, t_e, required, std::exp(hi)).total_time <= t_a) {
        lo = hi; // saturated; use the top of the bracket
    }
    for (int it = 0; it < 90 && hi - lo > 1e-13; ++it) {
        double c = std::exp(0.5 * (lo + hi));
        (mtm_point_at_price(ctx, t_e, required, c).total_time <= t_a ? lo : hi) =
            0.5 * (lo + hi);
    }
    out.price = std::exp(lo);
    out.rate = mtm_point_at_price(ctx, t_e, required, out.price).rate;
    return out;
}

SchemeResult assemble_mtm(const FixedSetContext& ctx, double t_e, double t_0) {
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
    result.su_throughputs.assign(ctx.n, 0.0);
    result.duals.mu.assign(ctx.n, 0.0);
    result.duals.rho.assign(ctx.n, 0.0);

    double required = std::min(ctx.required_relay_energy(t_e, t_0), ctx.relay_capacity(t_e));
    double t_a = std::max(1.0 - t_e - 2.0 * t_0, 0.0);

    MtmInner inner = mtm_point_value(ctx, t_e, t_0);
    double R = inner.rate;

    double relay_sum = 0.0;
    if (required > 0.0 && inner.any_relay && R > 0.0) {
        MtmPoint pt = mtm_point_at_price(ctx, t_e, required, inner.price);
        R = pt.rate;
        std::vector<char> relaying(ctx.n, 0);
        for (size_t j = 0; j < pt.relayers.size(); ++j) {
            int i = pt.relayers[j];
            relaying[i] = 1;
            double t_i = R / std::log1p(pt.x_relay[j]);
            al.t[i] = t_i;
            al.e_sh[i] = t_i * pt.x_relay[j] / ctx.gamma_ih[i];
            al.e_sp[i] = ctx.budget_rate[i] * t_e - al.e_sh[i];
            relay_sum += ctx.gamma_ip[i] * al.e_sp[i];
        }
        for (int i = 0; i < ctx.n; ++i) {
            if (relaying[i]) continue;
            al.e_sh[i] = ctx.budget_rate[i] * t_e;
            al.t[i] = time_for_rate(R, ctx.gamma_ih[i] * al.e_sh[i]);
            if (!std::isfinite(al.t[i])) al.t[i] = 0.0;
        }
    } else if (required <= 0.0 && R > 0.0) {
        for (int i = 0; i < ctx.n; ++i) {
            al.e_sh[i] = ctx.budget_rate[i] * t_e;
            al.t[i] = time_for_rate(R, ctx.gamma_ih[i] * al.e_sh[i]);
            if (!std::isfinite(al.t[i])) al.t[i] = 0.0;
        }
    } else {
        // Forced-zero minimum: meet the primary constraint, no access phase.
        auto fill = ctx.greedy_fill(t_e, required);
        for (int i = 0; i < ctx.n; ++i) {
            double r_i = ctx.budget_rate[i] * t_e;
            al.e_sp[i] = fill.relay_units[i] > 0.0 ? fill.relay_units[i] / ctx.gamma_ip[i] : 0.0;
            al.e_sp[i] = std::min(al.e_sp[i], r_i);
            al.e_sh[i] = r_i - al.e_sp[i];
            relay_sum += fill.relay_units[i];
            al.t[i] = ctx.n > 0 ? t_a / ctx.n : 0.0;
        }
        R = 0.0;
    }

    result.sum_throughput = 0.0;
    for (int i = 0; i < ctx.n; ++i) {
        result.su_throughputs[i] = su_rate(al.t[i], al.e_sh[i], ctx.gamma_ih[i]);
        result.sum_throughput += result.su_throughputs[i];
    }
    double relay_snr = (t_0 > 0.0 && relay_sum > 0.0) ? relay_sum / t_0 : 0.0;
    result.primary_rate = t_e * ctx.q1;
    if (t_0 > 0.0) result.primary_rate += t_0 * std::log1p(ctx.gamma_p + relay_snr);

    // Multipliers: the per-SU rate prices normalize to one, each SU's access
    // SNR pins nu/rho_i, and relayers tie lambda through the common price.
    if (R > 0.0) {
        DualState& du = result.duals;
        double inv_sum = 0.0;
        std::vector<double> psi(ctx.n, 0.0);
        for (int i = 0; i < ctx.n; ++i) {
            double x_i = al.t[i] > 0.0 ? ctx.gamma_ih[i] * al.e_sh[i] / al.t[i] : 0.0;
            psi[i] = marginal_rate_time(x_i);
            if (psi[i] > 0.0) inv_sum += 1.0 / psi[i];
        }
        if (inv_sum > 0.0) {
            du.nu = 1.0 / inv_sum;
            for (int i = 0; i < ctx.n; ++i)
                du.rho[i] = psi[i] > 0.0 ? du.nu / psi[i] : 0.0;
            for (int i = 0; i < ctx.n; ++i) {
                double x_i = al.t[i] > 0.0 ? ctx.gamma_ih[i] * al.e_sh[i] / al.t[i] : 0.0;
                du.mu[i] = du.rho[i] * ctx.gamma_ih[i] / (1.0 + x_i);
            }
            double y = (t_0 > 0.0 && relay_sum > 0.0) ? relay_sum / t_0 : 0.0;
            du.lambda = inner.any_relay ? du.nu * inner.price * (ctx.a + y) : 0.0;
            double t0_lb = ctx.t0_feasible_lower(t_e);
            if (t_0 <= t0_lb + std::max(1e-9, 1e-6 * t0_lb) && ctx.q2 > 0.0)
                du.kappa = std::max(0.0, (2.0 * du.nu -
                                          du.lambda * marginal_relay_time(ctx.a, y)) /
                                             ctx.q2);
        }
    }
    return result;
}

} // namespace

double mtm_access_time(double e_ih, double gamma_ih, double nu, double rho_i) {
    if (e_ih < 0.0 || nu < 0.0) throw std::invalid_argument("mtm_access_time: bad input");
    if (!(rho_i > 0.0)) throw std::invalid_argument("mtm_access_time: rho_i must be > 0");
    double num = gamma_ih * e_ih;
    if (num <= 0.0) return 0.0;
    double x = solve_rate_kkt_root(nu / rho_i);
    return x > 0.0 ? num / x : kInf;
}

SchemeResult solve_mtm(const ChannelState& channels, const ScenarioConfig& config,
                       const SolverTolerances& tol) {
    tol.validate();
    SchemeResult best;
    best.feasible = false;
    best.allocation.t.assign(channels.n(), 0.0);
    best.allocation.e_sh.assign(channels.n(), 0.0);
    best.allocation.e_sp.assign(channels.n(), 0.0);
    best.su_throughputs.assign(channels.n(), 0.0);
    double best_rate = -1.0;

    double arg_tol = std::max(tol.line_search_tol, 1e-13);
    for (int cutoff = channels.n(); cutoff >= 1; --cutoff) {
        auto ctx = FixedSetContext::make(channels, config, cutoff);
        auto interval = feasible_te_interval(ctx);
        if (!interval) continue;

        auto te_value = [&](double t_e, double* best_t0) {
            double lo = ctx.t0_feasible_lower(t_e);
            double hi = ctx.t0_upper(t_e);
            if (!(lo <= hi)) {
                if (best_t0) *best_t0 = 0.0;
                return -kInf;
            }
            auto [t0s, v] = golden_section_max(
                [&](double t0) { return mtm_point_value(ctx, t_e, t0).rate; }, lo, hi,
                arg_tol);
            if (best_t0) *best_t0 = t0s;
            return v;
        };
        auto [te_star, v] = golden_section_max(
            [&](double t_e) { return te_value(t_e, nullptr); }, interval->first,
            interval->second, arg_tol);
        (void)v;
        double t0_star = 0.0;
        te_value(te_star, &t0_star);
        SchemeResult r = assemble_mtm(ctx, te_star, t0_star);
        double rate = r.su_throughputs.empty()
                          ? 0.0
                          : *std::min_element(r.su_throughputs.begin(),
                                              r.su_throughputs.end());
        if (!best.feasible || rate > best_rate) {
            best_rate = rate;
            best = std::move(r);
        }
    }
    return best;
}

} // namespace wpccrn

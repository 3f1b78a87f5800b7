#include "wpccrn/dual_loop.hpp"

#include "wpccrn/core_math.hpp"
#include "wpccrn/scenario.hpp"

#include <algorithm>
#include <cmath>

namespace wpccrn {

namespace {
constexpr double kMuMin = 1e-12;
constexpr double kMuMax = 1e12;
} // namespace

std::pair<std::vector<double>, std::vector<double>> sp1_energy_allocation(
    const FixedSetContext& ctx, const std::vector<double>& t, double t_0, double t_e,
    double lambda, const SolverTolerances& tol) {
    const int n = ctx.n;
    std::vector<double> e_sh(n, 0.0), e_sp(n, 0.0);

    // Visit relay candidates first (priority order), then the rest; the relay
    // closed form depends on the other SUs' relay energies, so sweep until the
    // fixed point settles.
    std::vector<int> visit = ctx.relay_candidates;
    for (int i = 0; i < n; ++i)
        if (std::find(visit.begin(), visit.end(), i) == visit.end()) visit.push_back(i);

    bool is_candidate_arr_init = false;
    std::vector<char> is_candidate(n, 0);
    if (!is_candidate_arr_init) {
        for (int i : ctx.relay_candidates) is_candidate[i] = 1;
        is_candidate_arr_init = true;
    }

    for (int sweep = 0; sweep < 60; ++sweep) {
        double max_change = 0.0;
        for (int i : visit) {
            double budget = ctx.budget_rate[i] * t_e;
            double relay_others = 0.0;
            for (int j : ctx.relay_candidates)
                if (j != i) relay_others += ctx.gamma_ip[j] * e_sp[j];

            auto energies_at = [&](double mu) {
                double eh = ctx.gamma_ih[i] > 0.0
                                ? t[i] * std::max(1.0 / mu - 1.0 / ctx.gamma_ih[i], 0.0)
                                : 0.0;
                double ep = 0.0;
                if (is_candidate[i] && ctx.gamma_ip[i] > 0.0)
                    ep = t_0 * std::max(lambda / mu - ctx.a / ctx.gamma_ip[i] -
                                            relay_others / ctx.gamma_ip[i],
                                        0.0);
                return std::make_pair(eh, ep);
            };

            double mu_lo = kMuMin, mu_hi = kMuMax;
            double eh = 0.0, ep = 0.0;
            while (mu_hi - mu_lo > tol.epsilon * std::max(1.0, mu_lo)) {
                double mu = 0.5 * (mu_lo + mu_hi);
                std::tie(eh, ep) = energies_at(mu);
                if (eh + ep < budget)
                    mu_hi = mu;
                else
                    mu_lo = mu;
            }
            std::tie(eh, ep) = energies_at(0.5 * (mu_lo + mu_hi));
            // The positive-part clamps can leave the budget slack (both terms
            // zero); scale down instead of over-spending when they overshoot.
            if (eh + ep > budget && eh + ep > 0.0) {
                double scale = budget / (eh + ep);
                eh *= scale;
                ep *= scale;
            }
            max_change = std::max({max_change, std::abs(eh - e_sh[i]),
                                   std::abs(ep - e_sp[i])});
            e_sh[i] = eh;
            e_sp[i] = ep;
        }
        if (max_change < tol.epsilon * 1e-3) break;
    }
    return {std::move(e_sh), std::move(e_sp)};
}

std::pair<double, std::vector<double>> sp2_time_allocation(
    const FixedSetContext& ctx, const std::vector<double>& e_sh,
    const std::vector<double>& e_sp, const DualState& duals) {
    const int n = ctx.n;
    std::vector<double> t(n, 0.0);

    double x_star = duals.nu > 0.0 ? solve_rate_kkt_root(duals.nu) : 0.0;
    for (int i = 0; i < n; ++i) {
        double num = ctx.gamma_ih[i] * e_sh[i];
        t[i] = (num > 0.0 && x_star > 0.0) ? num / x_star : 0.0;
    }

    double relay_sum = 0.0;
    for (int i : ctx.relay_candidates) relay_sum += ctx.gamma_ip[i] * e_sp[i];
    double t_0 = 0.0;
    if (relay_sum > 0.0 && duals.lambda > 0.0) {
        double c = (2.0 * duals.nu - duals.kappa * ctx.q2) / duals.lambda;
        double y_star = shifted_rate_kkt_root(ctx.a, c);
        t_0 = y_star > 0.0 ? relay_sum / y_star : 0.5; // cap below
        t_0 = std::min(t_0, 0.5);
    }
    return {t_0, std::move(t)};
}

SchemeResult solve_fixed_set_dual(int cutoff, const ChannelState& channels,
                                  const ScenarioConfig& config,
                                  const SolverTolerances& tol) {
    tol.validate();
    auto ctx = FixedSetContext::make(channels, config, cutoff);

    SchemeResult result;
    result.decoding_set.members = ctx.decoders;
    result.decoding_set.cutoff = cutoff;
    result.allocation.t.assign(ctx.n, 0.0);
    result.allocation.e_sh.assign(ctx.n, 0.0);
    result.allocation.e_sp.assign(ctx.n, 0.0);
    result.su_throughputs.assign(ctx.n, 0.0);

    auto interval = feasible_te_interval(ctx);
    if (!interval) {
        result.feasible = false;
        return result;
    }

    DualState du;
    du.lambda = 1.0;
    du.kappa = 1.0;
    du.nu = 1.0;
    du.mu.assign(ctx.n, 1.0);

    double t_e = std::clamp(0.4, interval->first, interval->second);
    double t_0 = 0.2;
    std::vector<double> t(ctx.n, std::max(0.0, (1.0 - t_e - 2.0 * t_0) / ctx.n));
    std::vector<double> e_sh(ctx.n, 0.0), e_sp(ctx.n, 0.0);

    int outer = 0;
    bool converged = false;
    const int max_outer = std::max(tol.max_iterations / 100, 50);
    for (outer = 1; outer <= max_outer && !converged; ++outer) {
        double alpha = diminishing_step(tol.initial_step, outer);
        double prev_te = t_e, prev_t0 = t_0;
        std::vector<double> prev_t = t;

        for (int inner = 0; inner < 40; ++inner) {
            std::tie(e_sh, e_sp) = sp1_energy_allocation(ctx, t, t_0, t_e, du.lambda, tol);
            std::tie(t_0, t) = sp2_time_allocation(ctx, e_sh, e_sp, du);
            t_0 = std::clamp(t_0, ctx.t0_lower(t_e), ctx.t0_upper(t_e));

            // Projected gradient steps on the coupling multipliers.
            double relay_sum = 0.0;
            for (int i : ctx.relay_candidates) relay_sum += ctx.gamma_ip[i] * e_sp[i];
            double rpc = t_e * ctx.q1;
            if (t_0 > 0.0) rpc += t_0 * std::log1p(ctx.gamma_p + relay_sum / t_0);
            double sum_t = 0.0;
            for (double ti : t) sum_t += ti;

            double g_lambda = rpc - ctx.rbar;
            double g_kappa = ctx.q1 * t_e + ctx.q2 * t_0 - ctx.rbar;
            double g_nu = 1.0 - t_e - 2.0 * t_0 - sum_t;
            du.lambda = std::max(du.lambda - alpha * g_lambda, 1e-9);
            du.kappa = std::max(du.kappa - alpha * g_kappa, 0.0);
            du.nu = std::max(du.nu - alpha * g_nu, 1e-9);
        }

        // Recover the per-SU multipliers at the current point for the master
        // subgradient.
        for (int i = 0; i < ctx.n; ++i) {
            double budget = ctx.budget_rate[i] * t_e;
            double x_i = t[i] > 0.0 ? ctx.gamma_ih[i] * e_sh[i] / t[i] : 0.0;
            du.mu[i] = budget > 0.0 && x_i > 0.0 ? ctx.gamma_ih[i] / (1.0 + x_i) : 1.0;
        }
        double g_te = (du.lambda + du.kappa) * ctx.q1 - du.nu;
        for (int i = 0; i < ctx.n; ++i) g_te += du.mu[i] * ctx.budget_rate[i];
        t_e = std::clamp(t_e + alpha * g_te, interval->first, interval->second);

        double change = std::max(std::abs(t_e - prev_te), std::abs(t_0 - prev_t0));
        for (int i = 0; i < ctx.n; ++i)
            change = std::max(change, std::abs(t[i] - prev_t[i]));
        converged = change < tol.epsilon;
    }

    result.feasible = true;
    result.converged = converged;
    result.iterations = outer;
    result.allocation.t_e = t_e;
    result.allocation.t_0 = t_0;
    result.allocation.t = t;
    result.allocation.e_sh = e_sh;
    result.allocation.e_sp = e_sp;
    result.duals = du;
    result.sum_throughput = 0.0;
    for (int i = 0; i < ctx.n; ++i) {
        result.su_throughputs[i] = su_rate(t[i], e_sh[i], ctx.gamma_ih[i]);
        result.sum_throughput += result.su_throughputs[i];
    }
    result.primary_rate =
        primary_coop_rate(result.allocation, channels, config, result.decoding_set);
    return result;
}

} // namespace wpccrn

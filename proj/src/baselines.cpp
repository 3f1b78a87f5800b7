#include "wpccrn/baselines.hpp"

#include "wpccrn/fixed_set.hpp"
#include "wpccrn/scenario.hpp"
#include "wpccrn/stora.hpp"

#include <algorithm>
#include <numeric>

namespace wpccrn {

namespace {

SchemeResult infeasible_result(int n) {
    SchemeResult r;
    r.feasible = false;
    r.allocation.t.assign(n, 0.0);
    r.allocation.e_sh.assign(n, 0.0);
    r.allocation.e_sp.assign(n, 0.0);
    r.su_throughputs.assign(n, 0.0);
    return r;
}

bool mask_feasible(const ChannelState& channels, const ScenarioConfig& config, int cutoff,
                   const std::vector<char>& mask) {
    auto ctx = FixedSetContext::make(channels, config, cutoff, &mask);
    return feasible_te_interval(ctx).has_value();
}

// One uniformly random permutation per realization drives both random
// selection baselines; restricting it to a decoding set keeps each draw
// uniform over that set without replacement.
std::vector<int> random_permutation(int n, CounterRng& rng) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i)
        std::swap(perm[i], perm[rng.below(static_cast<std::uint64_t>(i) + 1)]);
    return perm;
}

} // namespace

SchemeResult solve_bss(const ChannelState& channels, const ScenarioConfig& config,
                       const SolverTolerances& tol) {
    tol.validate();
    const int n = channels.n();
    std::vector<int> order = decoding_order(channels);

    SchemeResult best = infeasible_result(n);
    for (int cutoff = n; cutoff >= 1; --cutoff) {
        for (int k = 0; k < cutoff; ++k) {
            std::vector<char> mask(n, 0);
            mask[order[k]] = 1;
            SchemeResult r = solve_fixed_set_masked(cutoff, channels, config, mask, tol);
            if (!r.feasible) continue;
            if (!best.feasible || r.sum_throughput > best.sum_throughput)
                best = std::move(r);
        }
    }
    return best;
}

SchemeResult solve_rss_single(const ChannelState& channels, const ScenarioConfig& config,
                              CounterRng& rng, const SolverTolerances& tol) {
    tol.validate();
    const int n = channels.n();
    std::vector<int> order = decoding_order(channels);
    std::vector<int> perm = random_permutation(n, rng);

    SchemeResult best = infeasible_result(n);
    for (int cutoff = n; cutoff >= 1; --cutoff) {
        std::vector<char> in_set(n, 0);
        for (int k = 0; k < cutoff; ++k) in_set[order[k]] = 1;
        // The chosen relay is the first decoder in the permutation draw.
        int chosen = -1;
        for (int i : perm)
            if (in_set[i]) {
                chosen = i;
                break;
            }
        if (chosen < 0) continue;
        std::vector<char> mask(n, 0);
        mask[chosen] = 1;
        SchemeResult r = solve_fixed_set_masked(cutoff, channels, config, mask, tol);
        if (!r.feasible) continue;
        if (!best.feasible || r.sum_throughput > best.sum_throughput) best = std::move(r);
    }
    return best;
}

SchemeResult solve_rss_multi(const ChannelState& channels, const ScenarioConfig& config,
                             CounterRng& rng, const SolverTolerances& tol) {
    tol.validate();
    const int n = channels.n();
    std::vector<int> order = decoding_order(channels);
    std::vector<int> perm = random_permutation(n, rng);

    SchemeResult best = infeasible_result(n);
    for (int cutoff = n; cutoff >= 1; --cutoff) {
        std::vector<char> in_set(n, 0);
        for (int k = 0; k < cutoff; ++k) in_set[order[k]] = 1;

        // Accumulate relays in permutation order until the target rate is
        // reachable; exhausting the set reproduces the full-set feasibility
        // condition of the optimal scheme.
        std::vector<char> mask(n, 0);
        bool feasible = false;
        for (int i : perm) {
            if (!in_set[i]) continue;
            mask[i] = 1;
            if (mask_feasible(channels, config, cutoff, mask)) {
                feasible = true;
                break;
            }
        }
        if (!feasible) continue;
        SchemeResult r = solve_fixed_set_masked(cutoff, channels, config, mask, tol);
        if (!r.feasible) continue;
        if (!best.feasible || r.sum_throughput > best.sum_throughput) best = std::move(r);
    }
    return best;
}

} // namespace wpccrn

#pragma once

#include "wpccrn/core_math.hpp"
#include "wpccrn/types.hpp"

#include <string>
#include <vector>

namespace wpccrn {

/// Jain's fairness index (sum x)^2 / (N sum x^2), in [1/N, 1].
/// Throws std::invalid_argument when the vector is empty or all-zero.
double jain_index(const std::vector<double>& throughputs);

/// Fraction of realizations that forged cooperation.
double prob_cooperation(const std::vector<SchemeResult>& results);

struct SweepSpec {
    std::string variable; // target_primary_rate | n_su | p_hap | su_radius
    std::vector<double> values;
    int realizations = 2000;
    std::vector<Scheme> schemes;
    std::uint64_t seed = 1;
    int jobs = 1;
    SolverTolerances tol;

    void validate() const;
};

struct SchemeStats {
    Scheme scheme = Scheme::STORA;
    double mean_sum_throughput = 0.0;
    double stderr_sum_throughput = 0.0;
    double jain_mean = 0.0;   // over realizations with a positive sum only
    double jain_stderr = 0.0;
    double p_coop = 0.0;
    double mean_t0 = 0.0;     // infeasible realizations contribute zero
    double mean_ta = 0.0;
    int failures = 0;         // solver non-convergence, excluded from means
    int jain_count = 0;
    int rmin_positive = 0;    // MTM: realizations with a positive minimum
    int rmin_fair = 0;        // ... of those, how many have Jain index == 1
};

struct SweepPoint {
    double value = 0.0;
    std::vector<SchemeStats> stats; // one per requested scheme, spec order
};

/// One solver call for one realization; baselines get their dedicated RNG
/// substream per the documented stream-splitting convention.
SchemeResult solve_scheme(Scheme scheme, const ChannelState& channels,
                          const ScenarioConfig& config, std::uint64_t seed,
                          std::uint64_t realization, const SolverTolerances& tol);

/// Monte-Carlo sweep: per value, `realizations` channel states shared across
/// all requested schemes (paired design), aggregated with deterministic
/// index-order reduction so the output is identical for any `jobs` value.
std::vector<SweepPoint> run_sweep(const SweepSpec& spec, const ScenarioConfig& base);

/// CSV with the fixed column set; all numbers at 17 significant digits.
std::string sweep_to_csv(const SweepSpec& spec, const std::vector<SweepPoint>& points);

/// JSON manifest capturing the resolved config and sweep parameters.
std::string sweep_manifest(const SweepSpec& spec, const ScenarioConfig& base);

void write_file(const std::string& path, const std::string& contents);

} // namespace wpccrn

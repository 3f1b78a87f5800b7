#pragma once

#include "wpccrn/types.hpp"

namespace wpccrn {

// Brute-force grid verification for small instances (N <= 3). The oracles
// share nothing with the solvers: feasibility is evaluated straight from the
// constraint definitions at every grid point, and the decoding test is the
// per-SU condition rather than the sorted-cutoff reduction.
struct GridSpec {
    // Step per gridded dimension on the coarse pass, as a fraction of the
    // dimension's range.
    double resolution = 1.0 / 24;
    // Local refinement passes; each shrinks every range 10x around the
    // incumbent at the same point count.
    int refine_rounds = 3;
    // Which variables are gridded is implied by the scheme: (t_e, t_0) and
    // per-SU energy-split fractions always; the access-time simplex for the
    // sum/min objectives; the common slot for equal-time; the
    // proportionality constant for proportional-time.

    void validate() const {
        if (!(resolution > 0.0) || resolution > 0.5)
            throw std::invalid_argument("resolution must be in (0, 0.5]");
        if (refine_rounds < 0) throw std::invalid_argument("refine_rounds must be >= 0");
    }
};

double oracle_stora(const ChannelState& channels, const ScenarioConfig& config,
                    const GridSpec& grid = {});
double oracle_eta(const ChannelState& channels, const ScenarioConfig& config,
                  const GridSpec& grid = {});
double oracle_mtm(const ChannelState& channels, const ScenarioConfig& config,
                  const GridSpec& grid = {});
double oracle_pta(const ChannelState& channels, const ScenarioConfig& config,
                  const GridSpec& grid = {});

} // namespace wpccrn

#include "wpccrn/harness.hpp"

#include "wpccrn/baselines.hpp"
#include "wpccrn/fairness.hpp"
#include "wpccrn/scenario.hpp"
#include "wpccrn/stora.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace wpccrn {

double jain_index(const std::vector<double>& throughputs) {
    if (throughputs.empty()) throw std::invalid_argument("jain_index: empty input");
    double sum = 0.0, sum_sq = 0.0;
    for (double x : throughputs) {
        if (x < 0.0) throw std::invalid_argument("jain_index: negative entry");
        sum += x;
        sum_sq += x * x;
    }
    if (sum_sq <= 0.0) throw std::invalid_argument("jain_index: all-zero input");
    return sum * sum / (static_cast<double>(throughputs.size()) * sum_sq);
}

double prob_cooperation(const std::vector<SchemeResult>& results) {
    if (results.empty()) throw std::invalid_argument("prob_cooperation: empty input");
    int feasible = 0;
    for (const auto& r : results) feasible += r.feasible ? 1 : 0;
    return static_cast<double>(feasible) / static_cast<double>(results.size());
}

void SweepSpec::validate() const {
    if (variable != "target_primary_rate" && variable != "n_su" && variable != "p_hap" &&
        variable != "su_radius")
        throw std::invalid_argument("sweep variable must be one of target_primary_rate, "
                                    "n_su, p_hap, su_radius");
    if (values.empty()) throw std::invalid_argument("sweep values must be nonempty");
    if (!std::is_sorted(values.begin(), values.end()))
        throw std::invalid_argument("sweep values must be sorted");
    if (realizations < 1) throw std::invalid_argument("realizations must be >= 1");
    if (schemes.empty()) throw std::invalid_argument("scheme list must be nonempty");
    if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
    tol.validate();
}

SchemeResult solve_scheme(Scheme scheme, const ChannelState& channels,
                          const ScenarioConfig& config, std::uint64_t seed,
                          std::uint64_t realization, const SolverTolerances& tol) {
    switch (scheme) {
        case Scheme::STORA: return solve_stora(channels, config, tol);
        case Scheme::ETA: return solve_eta(channels, config, tol);
        case Scheme::MTM: return solve_mtm(channels, config, tol);
        case Scheme::PTA: return solve_pta(channels, config, tol);
        case Scheme::BSS: return solve_bss(channels, config, tol);
        case Scheme::RSS_S: {
            CounterRng rng(seed, realization * 8 + 2);
            return solve_rss_single(channels, config, rng, tol);
        }
        case Scheme::RSS_M: {
            CounterRng rng(seed, realization * 8 + 3);
            return solve_rss_multi(channels, config, rng, tol);
        }
    }
    throw std::logic_error("unknown scheme");
}

namespace {

struct RealizationRecord {
    double sum = 0.0;
    double jain = -1.0; // < 0 when undefined (all-zero throughputs)
    double t0 = 0.0;
    double ta = 0.0;
    bool feasible = false;
    bool failed = false;
    bool rmin_positive = false;
};

ScenarioConfig config_at(const ScenarioConfig& base, const std::string& variable,
                         double value) {
    ScenarioConfig cfg = base;
    if (variable == "target_primary_rate") cfg.target_primary_rate = value;
    else if (variable == "n_su") cfg.n_su = static_cast<int>(std::lround(value));
    else if (variable == "p_hap") cfg.p_hap = value;
    else if (variable == "su_radius") cfg.su_radius = value;
    cfg.validate();
    return cfg;
}

} // namespace

std::vector<SweepPoint> run_sweep(const SweepSpec& spec, const ScenarioConfig& base) {
    spec.validate();
    base.validate();

    std::vector<SweepPoint> points;
    points.reserve(spec.values.size());

    const int n_schemes = static_cast<int>(spec.schemes.size());
    for (double value : spec.values) {
        ScenarioConfig cfg = config_at(base, spec.variable, value);
        cfg.rng_seed = spec.seed;

        std::vector<RealizationRecord> records(
            static_cast<size_t>(spec.realizations) * n_schemes);

        std::atomic<int> next{0};
        auto worker = [&]() {
            for (;;) {
                int r = next.fetch_add(1);
                if (r >= spec.realizations) return;
                ChannelState ch = make_realization(cfg, static_cast<std::uint64_t>(r));
                for (int s = 0; s < n_schemes; ++s) {
                    RealizationRecord& rec = records[static_cast<size_t>(r) * n_schemes + s];
                    try {
                        SchemeResult res = solve_scheme(spec.schemes[s], ch, cfg, spec.seed,
                                                        static_cast<std::uint64_t>(r),
                                                        spec.tol);
                        rec.feasible = res.feasible;
                        rec.failed = !res.converged;
                        rec.sum = res.feasible ? res.sum_throughput : 0.0;
                        rec.t0 = res.feasible ? res.allocation.t_0 : 0.0;
                        rec.ta = res.feasible ? res.allocation.access_time() : 0.0;
                        double mn = 0.0;
                        if (res.feasible && !res.su_throughputs.empty())
                            mn = *std::min_element(res.su_throughputs.begin(),
                                                   res.su_throughputs.end());
                        rec.rmin_positive = mn > 0.0;
                        if (res.feasible && rec.sum > 0.0)
                            rec.jain = jain_index(res.su_throughputs);
                    } catch (const std::exception&) {
                        rec.failed = true;
                    }
                }
            }
        };

        int jobs = std::min(spec.jobs, spec.realizations);
        if (jobs <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(jobs);
            for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }

        // Deterministic reduction in realization order.
        SweepPoint point;
        point.value = value;
        for (int s = 0; s < n_schemes; ++s) {
            SchemeStats st;
            st.scheme = spec.schemes[s];
            double sum = 0.0, sum_sq = 0.0;
            double jain = 0.0, jain_sq = 0.0;
            double t0 = 0.0, ta = 0.0;
            int count = 0, coop = 0;
            for (int r = 0; r < spec.realizations; ++r) {
                const RealizationRecord& rec = records[static_cast<size_t>(r) * n_schemes + s];
                if (rec.failed) {
                    ++st.failures;
                    continue;
                }
                ++count;
                coop += rec.feasible ? 1 : 0;
                sum += rec.sum;
                sum_sq += rec.sum * rec.sum;
                t0 += rec.t0;
                ta += rec.ta;
                if (rec.jain >= 0.0) {
                    ++st.jain_count;
                    jain += rec.jain;
                    jain_sq += rec.jain * rec.jain;
                    if (rec.rmin_positive) {
                        ++st.rmin_positive;
                        if (rec.jain > 1.0 - 1e-12) ++st.rmin_fair;
                    }
                }
            }
            if (count > 0) {
                st.mean_sum_throughput = sum / count;
                st.mean_t0 = t0 / count;
                st.mean_ta = ta / count;
                st.p_coop = static_cast<double>(coop) / count;
                if (count > 1) {
                    double var = (sum_sq - sum * sum / count) / (count - 1);
                    st.stderr_sum_throughput = std::sqrt(std::max(var, 0.0) / count);
                }
            }
            if (st.jain_count > 0) {
                st.jain_mean = jain / st.jain_count;
                if (st.jain_count > 1) {
                    double var = (jain_sq - jain * jain / st.jain_count) / (st.jain_count - 1);
                    st.jain_stderr = std::sqrt(std::max(var, 0.0) / st.jain_count);
                }
            }
            point.stats.push_back(st);
        }
        points.push_back(std::move(point));
    }
    return points;
}

namespace {
std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
} // namespace

std::string sweep_to_csv(const SweepSpec& spec, const std::vector<SweepPoint>& points) {
    std::string out = "swept_value,scheme,mean_sum_throughput,stderr,jain_mean,"
                      "jain_stderr,p_coop,mean_t0,mean_ta,failures\n";
    (void)spec;
    for (const auto& pt : points) {
        for (const auto& st : pt.stats) {
            out += fmt17(pt.value);
            out += ',';
            out += scheme_name(st.scheme);
            out += ',';
            out += fmt17(st.mean_sum_throughput);
            out += ',';
            out += fmt17(st.stderr_sum_throughput);
            out += ',';
            out += fmt17(st.jain_mean);
            out += ',';
            out += fmt17(st.jain_stderr);
            out += ',';
            out += fmt17(st.p_coop);
            out += ',';
            out += fmt17(st.mean_t0);
            out += ',';
            out += fmt17(st.mean_ta);
            out += ',';
            out += std::to_string(st.failures);
            out += '\n';
        }
    }
    return out;
}

std::string sweep_manifest(const SweepSpec& spec, const ScenarioConfig& base) {
    nlohmann::json j;
    j["tool"] = "wpccrn";
    j["version"] = "0.1.0";
    j["sweep"]["variable"] = spec.variable;
    j["sweep"]["values"] = spec.values;
    j["sweep"]["realizations"] = spec.realizations;
    j["sweep"]["seed"] = spec.seed;
    std::vector<std::string> names;
    for (Scheme s : spec.schemes) names.emplace_back(scheme_name(s));
    j["sweep"]["schemes"] = names;
    j["config"]["n_su"] = base.n_su;
    j["config"]["p_primary"] = base.p_primary;
    j["config"]["p_hap"] = base.p_hap;
    j["config"]["noise"] = base.noise;
    j["config"]["eta"] = base.eta;
    j["config"]["snr_gap"] = base.snr_gap;
    j["config"]["pathloss_exp"] = base.pathloss_exp;
    j["config"]["d_pt_pr"] = base.d_pt_pr;
    j["config"]["su_radius"] = base.su_radius;
    j["config"]["target_primary_rate"] = base.target_primary_rate;
    j["config"]["rng_seed"] = base.rng_seed;
    j["solver"]["epsilon"] = spec.tol.epsilon;
    j["solver"]["max_iterations"] = spec.tol.max_iterations;
    j["solver"]["initial_step"] = spec.tol.initial_step;
    j["solver"]["line_search_tol"] = spec.tol.line_search_tol;
    j["notes"]["pairing"] = "channel realizations are shared across schemes";
    j["notes"]["jain"] =
        "realizations with an all-zero throughput vector are excluded from the "
        "fairness average; infeasible realizations count as zero throughput";
    return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << contents;
}

} // namespace wpccrn

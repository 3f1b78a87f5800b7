#include "wpccrn/baselines.hpp"
#include "wpccrn/config.hpp"
#include "wpccrn/fairness.hpp"
#include "wpccrn/fixed_set.hpp"
#include "wpccrn/harness.hpp"
#include "wpccrn/oracle.hpp"
#include "wpccrn/scenario.hpp"
#include "wpccrn/stora.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace wpccrn;

constexpr int kExitConfig = 2;
constexpr int kExitFailureRate = 3;
constexpr int kExitVerifyGap = 4;

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag_seed) {
    if (flag_seed) return *flag_seed;
    if (const char* env = std::getenv("WPCCRN_SEED")) return std::strtoull(env, nullptr, 10);
    return 1;
}

ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    ScenarioConfig cfg = path.empty() ? ScenarioConfig{} : load_config_file(path);
    apply_overrides(cfg, overrides);
    return cfg;
}

std::vector<Scheme> parse_schemes(const std::string& text) {
    std::vector<Scheme> out;
    if (text == "all") {
        out = {Scheme::STORA, Scheme::ETA, Scheme::MTM, Scheme::PTA,
               Scheme::BSS,   Scheme::RSS_S, Scheme::RSS_M};
        return out;
    }
    std::string tok;
    std::istringstream ss(text);
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(scheme_from_name(tok));
    }
    if (out.empty()) throw ConfigError("empty scheme list");
    return out;
}

void print_result(const SchemeResult& r, const ChannelState& ch, const ScenarioConfig& cfg) {
    std::printf("feasible = %s\n", r.feasible ? "true" : "false");
    std::printf("converged = %s\n", r.converged ? "true" : "false");
    if (!r.feasible) {
        std::printf("limiting constraint: target primary rate %.17g is above the "
                    "attainable cooperative rate for every decoding set\n",
                    cfg.target_primary_rate);
        return;
    }
    std::printf("decoding set (cutoff %d):", r.decoding_set.cutoff);
    for (int i : r.decoding_set.members) std::printf(" %d", i);
    std::printf("\n");
    std::printf("t_e = %.17g\nt_0 = %.17g\nt_a = %.17g\n", r.allocation.t_e,
                r.allocation.t_0, r.allocation.access_time());
    for (size_t i = 0; i < r.su_throughputs.size(); ++i) {
        std::printf("su %zu: t = %.17g  e_sh = %.17g  e_sp = %.17g  rate = %.17g\n", i,
                    r.allocation.t[i], r.allocation.e_sh[i], r.allocation.e_sp[i],
                    r.su_throughputs[i]);
    }
    std::printf("sum_throughput = %.17g\nprimary_rate = %.17g\n", r.sum_throughput,
                r.primary_rate);
    std::printf("duals: lambda = %.17g  kappa = %.17g  nu = %.17g  zeta = %.17g\n",
                r.duals.lambda, r.duals.kappa, r.duals.nu, r.duals.zeta);
    for (size_t i = 0; i < r.duals.mu.size(); ++i)
        std::printf("  mu[%zu] = %.17g\n", i, r.duals.mu[i]);
    for (size_t i = 0; i < r.duals.rho.size(); ++i)
        std::printf("  rho[%zu] = %.17g\n", i, r.duals.rho[i]);

    KktResiduals res = kkt_residuals(r, ch, cfg);
    std::printf("residuals:\n");
    std::printf("  primary_rate_rel = %.3e\n", res.primary_rate_rel);
    std::printf("  budget_rel       = %.3e\n", res.budget_rel);
    std::printf("  total_time_rel   = %.3e\n", res.total_time_rel);
    std::printf("  lemma_ratio_rel  = %.3e\n", res.lemma_ratio_rel);
    std::printf("  kkt_access_energy = %.3e\n", res.kkt_access_energy);
    std::printf("  kkt_relay_energy  = %.3e\n", res.kkt_relay_energy);
    std::printf("  kkt_access_time   = %.3e\n", res.kkt_access_time);
    std::printf("  kkt_relay_time    = %.3e\n", res.kkt_relay_time);
    std::printf("  fractional_relayers = %d\n", res.fractional_relayers);
    std::printf("  relay_prefix_ok  = %s\n", res.relay_prefix_ok ? "true" : "false");
}

ChannelState channels_from_json(const std::string& path, int n_expected) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open channels file '" + path + "'");
    nlohmann::json j;
    in >> j;
    ChannelState ch;
    ch.h_p = j.at("h_p").get<double>();
    ch.h_ps = j.at("h_ps").get<std::vector<double>>();
    ch.h_sp = j.at("h_sp").get<std::vector<double>>();
    ch.h_hs = j.at("h_hs").get<std::vector<double>>();
    ch.h_sh = j.at("h_sh").get<std::vector<double>>();
    if (ch.n() != n_expected || static_cast<int>(ch.h_sp.size()) != n_expected ||
        static_cast<int>(ch.h_hs.size()) != n_expected ||
        static_cast<int>(ch.h_sh.size()) != n_expected)
        throw ConfigError("channels file size does not match n_su");
    return ch;
}

int run_sweep_cmd(const ScenarioConfig& cfg, SweepSpec spec, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    auto points = run_sweep(spec, cfg);

    int total = 0, failures = 0;
    for (const auto& pt : points)
        for (const auto& st : pt.stats) {
            total += spec.realizations;
            failures += st.failures;
        }
    std::string csv_path = out_dir + "/sweep_" + spec.variable + ".csv";
    write_file(csv_path, sweep_to_csv(spec, points));
    write_file(out_dir + "/sweep_" + spec.variable + ".manifest.json",
               sweep_manifest(spec, cfg));
    std::printf("wrote %s (%zu points)\n", csv_path.c_str(), points.size());

    if (total > 0 && failures > 0 &&
        static_cast<double>(failures) / total >= 0.005) {
        std::fprintf(stderr, "solver failure rate %.4f breaches the 0.5%% budget\n",
                     static_cast<double>(failures) / total);
        return kExitFailureRate;
    }
    return 0;
}

int cmd_verify(const ScenarioConfig& base, const std::string& scheme_text, double gap,
               std::uint64_t seed) {
    if (base.n_su > 3) {
        std::fprintf(stderr, "verify requires n_su <= 3 (oracle size guard)\n");
        return kExitConfig;
    }
    std::vector<Scheme> schemes;
    for (Scheme s : parse_schemes(scheme_text))
        if (s == Scheme::STORA || s == Scheme::ETA || s == Scheme::MTM || s == Scheme::PTA)
            schemes.push_back(s);

    ScenarioConfig cfg = base;
    cfg.rng_seed = seed;
    SolverTolerances tol;

    // The regression suite: the first 20 seeded realizations whose optimal
    // scheme is feasible.
    std::vector<std::uint64_t> instances;
    for (std::uint64_t k = 0; instances.size() < 20 && k < 400; ++k) {
        ChannelState ch = make_realization(cfg, k);
        if (solve_stora(ch, cfg, tol).feasible) instances.push_back(k);
    }

    bool ok = true;
    std::vector<std::string> offenders;
    for (std::uint64_t k : instances) {
        ChannelState ch = make_realization(cfg, k);
        for (Scheme s : schemes) {
            double solver = 0.0;
            double oracle = 0.0;
            switch (s) {
                case Scheme::STORA:
                    solver = solve_stora(ch, cfg, tol).sum_throughput;
                    oracle = oracle_stora(ch, cfg);
                    break;
                case Scheme::ETA:
                    solver = solve_eta(ch, cfg, tol).sum_throughput;
                    oracle = oracle_eta(ch, cfg);
                    break;
                case Scheme::MTM: {
                    auto r = solve_mtm(ch, cfg, tol);
                    solver = r.su_throughputs.empty()
                                 ? 0.0
                                 : *std::min_element(r.su_throughputs.begin(),
                                                     r.su_throughputs.end());
                    oracle = oracle_mtm(ch, cfg);
                    break;
                }
                case Scheme::PTA:
                    solver = solve_pta(ch, cfg, tol).sum_throughput;
                    oracle = oracle_pta(ch, cfg);
                    break;
                default: continue;
            }
            double rel = std::abs(solver - oracle) / std::max(oracle, 1e-9);
            std::printf("instance %llu %-5s solver %.9f oracle %.9f gap %.3e %s\n",
                        static_cast<unsigned long long>(k), scheme_name(s), solver, oracle,
                        rel, rel <= gap ? "ok" : "FAIL");
            if (rel > gap) {
                ok = false;
                offenders.push_back("instance " + std::to_string(k) + " " + scheme_name(s));
            }
        }
    }
    if (!ok) {
        std::fprintf(stderr, "gap breaches:\n");
        for (const auto& o : offenders) std::fprintf(stderr, "  %s\n", o.c_str());
        return kExitVerifyGap;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"wpccrn: resource allocation and fairness simulator for a "
                 "wireless powered cooperative cognitive radio network"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", values_text, var_name = "target_primary_rate";
    std::string scheme_text = "all", channels_path;
    std::vector<std::string> overrides;
    int realizations = 2000, jobs = 1, cutoff = 0;
    std::uint64_t realization_index = 0;
    std::optional<std::uint64_t> seed_flag;
    double gap = 1e-3;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "flat key=value config file");
        sub->add_option("--set", overrides,
                        "config override key=value (repeatable; powers accept _dbm)");
        sub->add_option("--seed", seed_flag, "RNG seed (fallback: WPCCRN_SEED env)");
    };

    CLI::App* sweep = app.add_subcommand("sweep", "Monte-Carlo parameter sweep to CSV");
    add_common(sweep);
    sweep->add_option("--var", var_name,
                      "swept variable: target_primary_rate | n_su | p_hap | p_hap_dbm | "
                      "su_radius");
    sweep->add_option("--values", values_text,
                      "comma list or start:stop:step (stop included when on the grid)")
        ->required();
    sweep->add_option("--realizations", realizations, "channel realizations per point");
    sweep->add_option("--schemes", scheme_text, "comma list or 'all'");
    sweep->add_option("--output-dir", out_dir, "output directory");
    sweep->add_option("--jobs", jobs, "worker threads (output is jobs-invariant)");

    CLI::App* solve = app.add_subcommand("solve", "solve one realization, print details");
    add_common(solve);
    solve->add_option("--scheme", scheme_text, "one scheme name")->required();
    solve->add_option("--realization", realization_index, "realization index");
    solve->add_option("--cutoff", cutoff, "force a decoding-set cutoff (optimal scheme)");
    solve->add_option("--channels", channels_path, "JSON file with explicit channel gains");

    CLI::App* verify = app.add_subcommand("verify", "solver vs brute-force oracle");
    add_common(verify);
    verify->add_option("--scheme", scheme_text, "stora|eta|mtm|pta|all");
    verify->add_option("--gap", gap, "relative gap tolerance");

    CLI::App* figures = app.add_subcommand(
        "paper-figures", "canonical sweep suite with the reference parameters");
    add_common(figures);
    figures->add_option("--realizations", realizations, "realizations per sweep point");
    figures->add_option("--output-dir", out_dir, "output directory");
    figures->add_option("--jobs", jobs, "worker threads");

    CLI11_PARSE(app, argc, argv);

    try {
        ScenarioConfig cfg = load_config(config_path, overrides);
        std::uint64_t seed = resolve_seed(seed_flag);

        if (sweep->parsed()) {
            SweepSpec spec;
            spec.variable = var_name;
            spec.values = parse_values_list(values_text);
            if (var_name == "p_hap_dbm") {
                spec.variable = "p_hap";
                for (double& v : spec.values) v = dbm_to_watts(v);
            }
            spec.realizations = realizations;
            spec.schemes = parse_schemes(scheme_text);
            spec.seed = seed;
            spec.jobs = jobs;
            return run_sweep_cmd(cfg, spec, out_dir);
        }

        if (solve->parsed()) {
            cfg.rng_seed = seed;
            ChannelState ch = channels_path.empty()
                                  ? make_realization(cfg, realization_index)
                                  : channels_from_json(channels_path, cfg.n_su);
            Scheme scheme = scheme_from_name(scheme_text);
            SolverTolerances tol;
            SchemeResult r = cutoff > 0 && scheme == Scheme::STORA
                                 ? solve_fixed_set(cutoff, ch, cfg, tol)
                                 : solve_scheme(scheme, ch, cfg, seed, realization_index,
                                                tol);
            print_result(r, ch, cfg);
            return 0;
        }

        if (verify->parsed()) {
            ScenarioConfig vcfg = cfg;
            if (config_path.empty() &&
                std::none_of(overrides.begin(), overrides.end(), [](const std::string& o) {
                    return o.rfind("n_su", 0) == 0;
                }))
                vcfg.n_su = 2; // oracle-sized default
            return cmd_verify(vcfg, scheme_text, gap, seed_flag ? *seed_flag : 20240001ULL);
        }

        if (figures->parsed()) {
            std::filesystem::create_directories(out_dir);
            std::vector<Scheme> main4 = {Scheme::STORA, Scheme::ETA, Scheme::MTM,
                                         Scheme::PTA};
            struct Fig {
                const char* var;
                std::vector<double> values;
                std::vector<Scheme> schemes;
            };
            std::vector<Fig> figs = {
                {"target_primary_rate",
                 {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5},
                 parse_schemes("all")},
                {"n_su", {2, 4, 6, 8}, main4},
                {"p_hap",
                 {dbm_to_watts(10), dbm_to_watts(15), dbm_to_watts(20), dbm_to_watts(25),
                  dbm_to_watts(30)},
                 main4},
                {"su_radius", {5, 10, 15, 20, 25}, main4},
            };
            int rc = 0;
            for (const auto& f : figs) {
                SweepSpec spec;
                spec.variable = f.var;
                spec.values = f.values;
                spec.realizations = realizations;
                spec.schemes = f.schemes;
                spec.seed = seed;
                spec.jobs = jobs;
                int one = run_sweep_cmd(cfg, spec, out_dir);
                rc = rc == 0 ? one : rc;
            }
            return rc;
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}

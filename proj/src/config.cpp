#include "wpccrn/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace wpccrn {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for key '" + key + "': '" + value + "'");
    }
}

} // namespace

void apply_config_entry(ScenarioConfig& config, const std::string& key,
                        const std::string& value) {
    if (key == "n_su") {
        config.n_su = static_cast<int>(parse_number(key, value));
    } else if (key == "p_primary") {
        config.p_primary = parse_number(key, value);
    } else if (key == "p_primary_dbm") {
        config.p_primary = dbm_to_watts(parse_number(key, value));
    } else if (key == "p_hap") {
        config.p_hap = parse_number(key, value);
    } else if (key == "p_hap_dbm") {
        config.p_hap = dbm_to_watts(parse_number(key, value));
    } else if (key == "noise") {
        config.noise = parse_number(key, value);
    } else if (key == "noise_dbm") {
        config.noise = dbm_to_watts(parse_number(key, value));
    } else if (key == "eta") {
        config.eta = parse_number(key, value);
    } else if (key == "snr_gap") {
        config.snr_gap = parse_number(key, value);
    } else if (key == "snr_gap_db") {
        config.snr_gap = db_to_linear(parse_number(key, value));
    } else if (key == "pathloss_exp") {
        config.pathloss_exp = parse_number(key, value);
    } else if (key == "d_pt_pr") {
        config.d_pt_pr = parse_number(key, value);
    } else if (key == "su_radius") {
        config.su_radius = parse_number(key, value);
    } else if (key == "target_primary_rate") {
        config.target_primary_rate = parse_number(key, value);
    } else if (key == "rng_seed") {
        config.rng_seed = static_cast<std::uint64_t>(parse_number(key, value));
    } else {
        throw ConfigError("config: unknown key '" + key + "'");
    }
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");

    ScenarioConfig config;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) +
                              " is not 'key = value'");
        apply_config_entry(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    config.validate();
    return config;
}

void apply_overrides(ScenarioConfig& config, const std::vector<std::string>& overrides) {
    for (const std::string& ov : overrides) {
        size_t eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override is not 'key=value': '" + ov + "'");
        apply_config_entry(config, trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
    }
    config.validate();
}

std::vector<double> parse_values_list(const std::string& text) {
    std::vector<double> values;
    if (text.find(':') != std::string::npos) {
        // start:stop:step, inclusive of stop when it lands on the grid
        double start, stop, step;
        char c1, c2;
        std::istringstream ss(text);
        if (!(ss >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' ||
            !(step > 0.0))
            throw ConfigError("bad range syntax (want start:stop:step): '" + text + "'");
        for (int k = 0;; ++k) {
            double v = start + k * step;
            if (v > stop + 1e-9 * step) break;
            values.push_back(v);
        }
    } else {
        std::istringstream ss(text);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            tok = trim(tok);
            if (tok.empty()) continue;
            try {
                values.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw ConfigError("bad value in list: '" + tok + "'");
            }
        }
    }
    if (values.empty()) throw ConfigError("empty values list: '" + text + "'");
    return values;
}

} // namespace wpccrn

#pragma once

#include "wpccrn/types.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace wpccrn {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Apply one `key = value` assignment. Power keys accept a `_dbm` suffix,
/// the SNR gap a `_db` suffix; conversion to linear units happens here.
/// Throws ConfigError on an unknown key or unparsable value.
void apply_config_entry(ScenarioConfig& config, const std::string& key,
                        const std::string& value);

/// Flat `key = value` file, one entry per line, `#` starts a comment.
ScenarioConfig load_config_file(const std::string& path);

/// Parse "key=value" override strings on top of an existing config.
void apply_overrides(ScenarioConfig& config, const std::vector<std::string>& overrides);

/// Values list syntax: either comma-separated ("0.5,1.0") or an inclusive
/// range "start:stop:step" (stop included when it lands on the grid).
std::vector<double> parse_values_list(const std::string& text);

} // namespace wpccrn

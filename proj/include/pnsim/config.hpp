#ifndef PNSIM_CONFIG_HPP
#define PNSIM_CONFIG_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pnsim/montecarlo.hpp"

namespace pnsim {

/// Raised for malformed or invalid configuration; the CLI maps it to exit
/// code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parsed experiment plus the resolved JSON document (after overrides) for
/// the metadata sidecar.
struct LoadedConfig {
    ExperimentConfig experiment;
    nlohmann::ordered_json resolved;
};

/// Loads the JSON config (sections: psd, numerology, plan, experiment),
/// applies `key=value` overrides, validates, and builds the experiment.
/// Override keys may be section-qualified ("experiment.master_seed") or bare
/// when unambiguous ("master_seed", "snr_grid"); values are parsed as JSON
/// when possible, otherwise taken as strings.
LoadedConfig load_config(const std::string& path,
                         const std::vector<std::string>& overrides);

/// Same, from an already-parsed document.
LoadedConfig config_from_json(nlohmann::ordered_json doc,
                              const std::vector<std::string>& overrides);

/// SNR grid syntax: "start:step:stop" (inclusive), a JSON array of numbers,
/// or the string "inf" for the noise-free flag value.
std::vector<double> parse_snr_grid(const nlohmann::ordered_json& value);

/// Serializes an experiment back to the canonical JSON layout.
nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);

}  // namespace pnsim

#endif

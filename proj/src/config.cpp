#include "pnsim/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace pnsim {

using nlohmann::ordered_json;

namespace {

// Representative oscillator model at a 15 GHz reference: -84 dBc/Hz in-loop
// level, 30 kHz loop bandwidth, -40 dB far-out floor. Placeholder until a
// measured parameter set is supplied in the config file.
const ordered_json kDefaultPsd = {
    {"s0_dbchz", -84.0},
    {"f_base_hz", 15e9},
    {"stages", ordered_json::array({{{"f_zero_hz", 3e6}, {"f_pole_hz", 3e4}}})},
};

const ordered_json kDefaultNumerology = {
    {"n_subcarriers", 256}, {"cp_len", 16},    {"delta_f_hz", 240e3},
    {"pilot_fraction", 0.25}, {"qam_order", 64},
};

const ordered_json kDefaultPlan = {{"kind", "homodyne"}, {"f_rf_hz", 140e9}};

const ordered_json kDefaultExperiment = {
    {"snr_grid_db", "0:1:30"}, {"n_symbols_per_run", 1000}, {"n_mc_runs", 200},
    {"cpe_correction", false}, {"master_seed", 1},          {"pn_per_symbol", false},
};

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError("config error in " + where + ": " + what);
}

template <typename T>
T get_field(const ordered_json& section, const char* section_name, const char* key) {
    if (!section.contains(key)) {
        fail(std::string("[") + section_name + "]", std::string("missing field '") + key + "'");
    }
    try {
        return section.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        fail(std::string("[") + section_name + "]." + key, e.what());
    }
}

double parse_snr_token(const std::string& tok) {
    if (tok == "inf" || tok == "+inf") return std::numeric_limits<double>::infinity();
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("trailing characters");
    return v;
}

std::vector<double> parse_snr_string(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(tok);
    if (parts.size() == 1) return {parse_snr_token(parts[0])};
    if (parts.size() != 3) {
        throw std::invalid_argument("expected 'start:step:stop' or a single value");
    }
    const double start = parse_snr_token(parts[0]);
    const double step = parse_snr_token(parts[1]);
    const double stop = parse_snr_token(parts[2]);
    if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop) || stop < start) {
        throw std::invalid_argument("need finite start <= stop and step > 0");
    }
    const auto count = static_cast<std::size_t>(
        std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i) {
        grid[i] = start + static_cast<double>(i) * step;
    }
    return grid;
}

// Maps bare override keys to their section.
const std::map<std::string, std::pair<std::string, std::string>>& key_aliases() {
    static const std::map<std::string, std::pair<std::string, std::string>> m = {
        {"s0_dbchz", {"psd", "s0_dbchz"}},
        {"f_base_hz", {"psd", "f_base_hz"}},
        {"stages", {"psd", "stages"}},
        {"n_subcarriers", {"numerology", "n_subcarriers"}},
        {"cp_len", {"numerology", "cp_len"}},
        {"delta_f_hz", {"numerology", "delta_f_hz"}},
        {"pilot_fraction", {"numerology", "pilot_fraction"}},
        {"qam_order", {"numerology", "qam_order"}},
        {"kind", {"plan", "kind"}},
        {"f_rf_hz", {"plan", "f_rf_hz"}},
        {"f_if_hz", {"plan", "f_if_hz"}},
        {"snr_grid_db", {"experiment", "snr_grid_db"}},
        {"snr_grid", {"experiment", "snr_grid_db"}},
        {"n_symbols_per_run", {"experiment", "n_symbols_per_run"}},
        {"n_mc_runs", {"experiment", "n_mc_runs"}},
        {"cpe_correction", {"experiment", "cpe_correction"}},
        {"master_seed", {"experiment", "master_seed"}},
        {"pn_per_symbol", {"experiment", "pn_per_symbol"}},
    };
    return m;
}

void apply_override(ordered_json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        fail("--set", "expected key=value, got '" + assignment + "'");
    }
    std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);

    std::string section;
    const auto dot = key.find('.');
    if (dot != std::string::npos) {
        section = key.substr(0, dot);
        key = key.substr(dot + 1);
        if (!doc.contains(section) && section != "psd" && section != "numerology" &&
            section != "plan" && section != "experiment") {
            fail("--set", "unknown section '" + section + "'");
        }
        const auto alias = key_aliases().find(key);
        if (alias != key_aliases().end()) key = alias->second.second;
    } else {
        const auto alias = key_aliases().find(key);
        if (alias == key_aliases().end()) {
            fail("--set", "unknown key '" + key + "'");
        }
        section = alias->second.first;
        key = alias->second.second;
    }

    ordered_json value;
    try {
        value = ordered_json::parse(raw);
    } catch (const nlohmann::json::exception&) {
        value = raw;  // keep as string (e.g. "0:10:30", "heterodyne")
    }
    doc[section][key] = value;
}

}  // namespace

std::vector<double> parse_snr_grid(const ordered_json& value) {
    if (value.is_string()) return parse_snr_string(value.get<std::string>());
    if (value.is_number()) return {value.get<double>()};
    if (value.is_array()) {
        std::vector<double> grid;
        for (const auto& v : value) {
            if (v.is_string()) {
                grid.push_back(parse_snr_token(v.get<std::string>()));
            } else {
                grid.push_back(v.get<double>());
            }
        }
        return grid;
    }
    throw std::invalid_argument("snr grid must be a string, number, or array");
}

LoadedConfig config_from_json(ordered_json doc, const std::vector<std::string>& overrides) {
    for (const auto& sec : {"psd", "numerology", "plan", "experiment"}) {
        if (doc.contains(sec) && !doc.at(sec).is_object()) {
            fail(std::string("[") + sec + "]", "must be an object");
        }
    }
    // Fill missing keys with defaults, then apply overrides on top.
    const std::map<std::string, const ordered_json*> defaults = {
        {"psd", &kDefaultPsd},
        {"numerology", &kDefaultNumerology},
        {"plan", &kDefaultPlan},
        {"experiment", &kDefaultExperiment},
    };
    for (const auto& [name, def] : defaults) {
        if (!doc.contains(name)) doc[name] = ordered_json::object();
        for (auto it = def->begin(); it != def->end(); ++it) {
            if (!doc[name].contains(it.key())) doc[name][it.key()] = it.value();
        }
    }
    for (const auto& ov : overrides) apply_override(doc, ov);

    LoadedConfig loaded;
    const auto& psd_sec = doc.at("psd");
    std::vector<ZeroPoleStage> stages;
    if (psd_sec.contains("stages")) {
        if (!psd_sec.at("stages").is_array()) fail("[psd].stages", "must be an array");
        for (const auto& st : psd_sec.at("stages")) {
            ZeroPoleStage zp{};
            try {
                zp.f_zero_hz = st.at("f_zero_hz").get<double>();
                zp.f_pole_hz = st.at("f_pole_hz").get<double>();
            } catch (const nlohmann::json::exception& e) {
                fail("[psd].stages", e.what());
            }
            stages.push_back(zp);
        }
    }

    try {
        loaded.experiment.ref_psd = PhaseNoisePsd::from_dbchz(
            get_field<double>(psd_sec, "psd", "s0_dbchz"),
            get_field<double>(psd_sec, "psd", "f_base_hz"), std::move(stages));
    } catch (const std::domain_error& e) {
        fail("[psd]", e.what());
    }

    const auto& num_sec = doc.at("numerology");
    try {
        loaded.experiment.numerology = OfdmNumerology::make(
            get_field<std::size_t>(num_sec, "numerology", "n_subcarriers"),
            get_field<std::size_t>(num_sec, "numerology", "cp_len"),
            get_field<double>(num_sec, "numerology", "delta_f_hz"),
            get_field<double>(num_sec, "numerology", "pilot_fraction"),
            get_field<std::size_t>(num_sec, "numerology", "qam_order"));
    } catch (const std::invalid_argument& e) {
        fail("[numerology]", e.what());
    }

    const auto& plan_sec = doc.at("plan");
    const auto kind = get_field<std::string>(plan_sec, "plan", "kind");
    try {
        if (kind == "homodyne") {
            loaded.experiment.plan = FrequencyPlan::homodyne(
                get_field<double>(plan_sec, "plan", "f_rf_hz"));
        } else if (kind == "heterodyne") {
            loaded.experiment.plan = FrequencyPlan::heterodyne(
                get_field<double>(plan_sec, "plan", "f_rf_hz"),
                get_field<double>(plan_sec, "plan", "f_if_hz"));
        } else {
            fail("[plan].kind", "must be 'homodyne' or 'heterodyne'");
        }
    } catch (const std::invalid_argument& e) {
        fail("[plan]", e.what());
    }

    const auto& exp_sec = doc.at("experiment");
    try {
        loaded.experiment.snr_grid_db = parse_snr_grid(exp_sec.at("snr_grid_db"));
    } catch (const std::exception& e) {
        fail("[experiment].snr_grid_db", e.what());
    }
    loaded.experiment.n_symbols_per_run =
        get_field<std::size_t>(exp_sec, "experiment", "n_symbols_per_run");
    loaded.experiment.n_mc_runs =
        get_field<std::size_t>(exp_sec, "experiment", "n_mc_runs");
    loaded.experiment.cpe_correction =
        get_field<bool>(exp_sec, "experiment", "cpe_correction");
    loaded.experiment.master_seed =
        get_field<std::uint64_t>(exp_sec, "experiment", "master_seed");
    loaded.experiment.pn_per_symbol =
        get_field<bool>(exp_sec, "experiment", "pn_per_symbol");

    if (loaded.experiment.n_symbols_per_run == 0 || loaded.experiment.n_mc_runs == 0) {
        fail("[experiment]", "n_symbols_per_run and n_mc_runs must be > 0");
    }

    loaded.resolved = config_to_json(loaded.experiment);
    return loaded;
}

LoadedConfig load_config(const std::string& path,
                         const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config parse error in ") + path + ": " + e.what());
    }
    return config_from_json(std::move(doc), overrides);
}

ordered_json config_to_json(const ExperimentConfig& cfg) {
    ordered_json doc;
    doc["psd"]["s0_dbchz"] = 10.0 * std::log10(cfg.ref_psd.s0());
    doc["psd"]["f_base_hz"] = cfg.ref_psd.base_carrier_hz();
    doc["psd"]["stages"] = ordered_json::array();
    for (const auto& st : cfg.ref_psd.stages()) {
        doc["psd"]["stages"].push_back(
            {{"f_zero_hz", st.f_zero_hz}, {"f_pole_hz", st.f_pole_hz}});
    }
    doc["numerology"] = {{"n_subcarriers", cfg.numerology.n_subcarriers},
                         {"cp_len", cfg.numerology.cp_len},
                         {"delta_f_hz", cfg.numerology.delta_f_hz},
                         {"pilot_fraction", cfg.numerology.pilot_fraction},
                         {"qam_order", cfg.numerology.qam_order}};
    doc["plan"]["kind"] =
        cfg.plan.kind() == PlanKind::homodyne ? "homodyne" : "heterodyne";
    doc["plan"]["f_rf_hz"] = cfg.plan.f_rf_hz();
    if (cfg.plan.kind() == PlanKind::heterodyne) {
        doc["plan"]["f_if_hz"] = cfg.plan.f_if_hz();
        doc["plan"]["f_rflo_hz"] = cfg.plan.f_rflo_hz();
    }
    ordered_json grid = ordered_json::array();
    for (double v : cfg.snr_grid_db) {
        if (std::isinf(v)) {
            grid.push_back("inf");
        } else {
            grid.push_back(v);
        }
    }
    doc["experiment"] = {{"snr_grid_db", grid},
                         {"n_symbols_per_run", cfg.n_symbols_per_run},
                         {"n_mc_runs", cfg.n_mc_runs},
                         {"cpe_correction", cfg.cpe_correction},
                         {"master_seed", cfg.master_seed},
                         {"pn_per_symbol", cfg.pn_per_symbol}};
    return doc;
}

}  // namespace pnsim

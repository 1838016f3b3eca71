#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "analogc/aais.hpp"
#include "json.hpp"

namespace analogc {

namespace {

using nlohmann::json;

const std::set<std::string> kTopKeys = {"aais", "num_sites", "connectivity", "constants", "durations", "signal_lines"};
const std::set<std::string> kFamilies = {kFamily1Site, kFamily2Site, kFamilyGlobal, kFamilyIdle, "eta_virtual_z"};

std::set<std::string> allowed_constants(const std::string& aais) {
    if (aais == "ideal_rydberg" || aais == "global_rydberg") return {"C6"};
    if (aais == "ibm_native") return {"omega_zx", "omega_zz", "omega_ix", "omega_zi"};
    return {};
}

double number_at(const json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError(where + ": expected a number");
    return j.get<double>();
}

}  // namespace

MachineConfig parse_machine_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("machine config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("machine config must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (!kTopKeys.count(key)) throw ConfigError("unknown machine config key '" + key + "'");
    }
    MachineConfig cfg;
    if (!doc.contains("aais") || !doc["aais"].is_string()) throw ConfigError("/aais: required string");
    cfg.aais = doc["aais"].get<std::string>();
    auto names = builtin_aais_names();
    if (std::find(names.begin(), names.end(), cfg.aais) == names.end()) throw ConfigError("unknown AAIS '" + cfg.aais + "'");

    if (!doc.contains("num_sites") || !doc["num_sites"].is_number_integer() || doc["num_sites"].get<long long>() < 1) {
        throw ConfigError("/num_sites: required positive integer");
    }
    cfg.num_sites = static_cast<std::size_t>(doc["num_sites"].get<long long>());

    if (doc.contains("connectivity")) {
        const json& edges = doc["connectivity"];
        if (!edges.is_array()) throw ConfigError("/connectivity: expected an array of pairs");
        for (std::size_t i = 0; i < edges.size(); ++i) {
            const json& e = edges[i];
            std::string where = "/connectivity/" + std::to_string(i);
            if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
                throw ConfigError(where + ": expected [int, int]");
            }
            long long a = e[0].get<long long>(), b = e[1].get<long long>();
            if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= cfg.num_sites || static_cast<std::size_t>(b) >= cfg.num_sites || a == b) {
                throw ConfigError(where + ": invalid edge");
            }
            cfg.connectivity.emplace_back(static_cast<SiteId>(a), static_cast<SiteId>(b));
        }
    } else if (cfg.aais == "heisenberg" || cfg.aais == "two_pauli" || cfg.aais == "ibm_native") {
        throw ConfigError("/connectivity: required for " + cfg.aais);
    }

    auto allowed = allowed_constants(cfg.aais);
    if (doc.contains("constants")) {
        if (!doc["constants"].is_object()) throw ConfigError("/constants: expected an object");
        for (const auto& [key, value] : doc["constants"].items()) {
            if (!allowed.count(key)) throw ConfigError("/constants/" + key + ": not a constant of " + cfg.aais);
            cfg.constants[key] = number_at(value, "/constants/" + key);
        }
    }
    for (const auto& c : allowed) {
        if (!cfg.constants.count(c)) throw ConfigError("missing constant '" + c + "' for " + cfg.aais);
    }

    if (doc.contains("durations")) {
        if (!doc["durations"].is_object()) throw ConfigError("/durations: expected an object");
        for (const auto& [fam, value] : doc["durations"].items()) {
            std::string where = "/durations/" + fam;
            if (!kFamilies.count(fam)) throw ConfigError(where + ": unknown instruction family");
            if (!value.is_object()) throw ConfigError(where + ": expected {\"base\", \"slope\"}");
            for (const auto& [k, v] : value.items())
                if (k != "base" && k != "slope") throw ConfigError(where + "/" + k + ": unknown key");
            if (!value.contains("base") || !value.contains("slope")) throw ConfigError(where + ": needs both base and slope");
            cfg.durations[fam] = DurationModel{number_at(value["base"], where + "/base"), number_at(value["slope"], where + "/slope")};
        }
    }

    if (doc.contains("signal_lines")) {
        if (!doc["signal_lines"].is_object()) throw ConfigError("/signal_lines: expected an object");
        for (const auto& [name, value] : doc["signal_lines"].items()) {
            if (!value.is_number_integer() || value.get<long long>() < 0) throw ConfigError("/signal_lines/" + name + ": expected a line id");
            cfg.signal_lines[name] = static_cast<LineId>(value.get<long long>());
        }
    }
    return cfg;
}

MachineConfig load_machine_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_machine_config(ss.str());
}

AAIS build_machine(const MachineConfig& cfg) {
    AAIS a;
    if (cfg.aais == "ideal_rydberg") {
        a = build_ideal_rydberg(cfg.num_sites, cfg.constants.at("C6"));
    } else if (cfg.aais == "global_rydberg") {
        a = build_global_rydberg(cfg.num_sites, cfg.constants.at("C6"));
    } else if (cfg.aais == "heisenberg") {
        a = build_heisenberg(cfg.num_sites, cfg.connectivity);
    } else if (cfg.aais == "two_pauli") {
        a = build_two_pauli(cfg.num_sites, cfg.connectivity);
    } else if (cfg.aais == "ibm_native") {
        IbmConstants w{cfg.constants.at("omega_zx"), cfg.constants.at("omega_zz"), cfg.constants.at("omega_ix"), cfg.constants.at("omega_zi")};
        a = build_ibm_native(cfg.num_sites, cfg.connectivity, w);
    } else {
        throw ConfigError("unknown AAIS '" + cfg.aais + "'");
    }
    for (auto& ins : a.instructions) {
        auto it = cfg.durations.find(ins.family);
        if (it != cfg.durations.end()) ins.duration = it->second;
    }
    if (auto it = cfg.durations.find(kFamilyIdle); it != cfg.durations.end()) a.idle = it->second;
    for (const auto& [name, line] : cfg.signal_lines) {
        auto found = std::find_if(a.instructions.begin(), a.instructions.end(), [&](const Instruction& i) { return i.name == name; });
        if (found == a.instructions.end()) throw ConfigError("/signal_lines/" + name + ": no such instruction");
        found->signal_line = line;
    }
    a.validate();
    return a;
}

}  // namespace analogc

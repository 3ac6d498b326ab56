#include "sqg/config.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace sqg {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where,
                    std::vector<std::string>& errors) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            errors.push_back("unknown key '" + where + it.key() + "'");
}

template <class T>
void read(const json& j, const char* key, T& out, std::vector<std::string>& errors,
          const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        errors.push_back("bad value for '" + where + key + "': " + e.what());
    }
}

} // namespace

void ExperimentConfig::validate() const {
    std::vector<std::string> errors;
    try {
        solver.validate();
    } catch (const std::exception& e) {
        errors.emplace_back(e.what());
    }
    try {
        datum.validate();
    } catch (const std::exception& e) {
        errors.emplace_back(e.what());
    }
    try {
        theory.validate();
    } catch (const std::exception& e) {
        errors.emplace_back(e.what());
    }
    if (probes.alphas.empty()) errors.emplace_back("probes.alphas must not be empty");
    for (double a : probes.alphas) {
        if (!(a > 0.0 && a < 1.0))
            errors.push_back("probe alpha " + std::to_string(a) + " outside (0,1)");
        else if (solver.gamma < 1.0 && !(a > 1.0 - solver.gamma))
            errors.push_back("probe alpha " + std::to_string(a) + " not above 1-gamma = " +
                             std::to_string(1.0 - solver.gamma));
    }
    if (output.directory.empty()) errors.emplace_back("output.directory must not be empty");
    if (output.cadence_dt < 0.0) errors.emplace_back("output.cadence_dt must be >= 0");
    if (output.cadence_dt == 0.0 && output.cadence_steps == 0)
        errors.emplace_back("one of output.cadence_steps / output.cadence_dt must be positive");
    if (!errors.empty()) {
        std::ostringstream os;
        os << "invalid configuration (" << errors.size() << " problem"
           << (errors.size() == 1 ? "" : "s") << "):";
        for (const auto& e : errors) os << "\n  - " << e;
        throw ConfigError(os.str());
    }
}

json ExperimentConfig::to_json() const {
    json j;
    j["solver"] = {{"n", solver.n},
                   {"gamma", solver.gamma},
                   {"gamma0", solver.gamma0},
                   {"cfl_number", solver.cfl_number},
                   {"dt_max", solver.dt_max},
                   {"t_end", solver.t_end},
                   {"blowup_threshold", solver.blowup_threshold},
                   {"linear_only", solver.linear_only},
                   {"flip_dissipation_sign", solver.flip_dissipation_sign}};
    json modes = json::array();
    for (const auto& m : datum.modes)
        modes.push_back({{"k", {m.k[0], m.k[1]}}, {"amplitude", m.amplitude}, {"phase", m.phase}});
    j["datum"] = {{"kind", datum.kind == InitialDatumSpec::Kind::modes ? "modes"
                                                                       : "random_spectrum"},
                  {"modes", modes},
                  {"slope", datum.slope},
                  {"cutoff", datum.cutoff},
                  {"seed", datum.seed},
                  {"scale", datum.scale}};
    j["probes"] = {{"alphas", probes.alphas}, {"xi_schedule", probes.xi_schedule}};
    j["theory"] = {{"c0", theory.c0}, {"c1", theory.c1}, {"C0", theory.C0},
                   {"c_embed", theory.c_embed}};
    j["output"] = {{"directory", output.directory},
                   {"cadence_steps", output.cadence_steps},
                   {"cadence_dt", output.cadence_dt},
                   {"snapshots", output.snapshots}};
    j["seed"] = seed;
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    ExperimentConfig cfg;
    std::vector<std::string> errors;

    reject_unknown(j, {"solver", "datum", "probes", "theory", "output", "seed"}, "", errors);

    if (j.contains("solver")) {
        const json& s = j.at("solver");
        reject_unknown(s,
                       {"n", "gamma", "gamma0", "cfl_number", "dt_max", "t_end",
                        "blowup_threshold", "linear_only", "flip_dissipation_sign"},
                       "solver.", errors);
        read(s, "n", cfg.solver.n, errors, "solver.");
        read(s, "gamma", cfg.solver.gamma, errors, "solver.");
        read(s, "gamma0", cfg.solver.gamma0, errors, "solver.");
        read(s, "cfl_number", cfg.solver.cfl_number, errors, "solver.");
        read(s, "dt_max", cfg.solver.dt_max, errors, "solver.");
        read(s, "t_end", cfg.solver.t_end, errors, "solver.");
        read(s, "blowup_threshold", cfg.solver.blowup_threshold, errors, "solver.");
        read(s, "linear_only", cfg.solver.linear_only, errors, "solver.");
        read(s, "flip_dissipation_sign", cfg.solver.flip_dissipation_sign, errors, "solver.");
    }
    if (j.contains("datum")) {
        const json& d = j.at("datum");
        reject_unknown(d, {"kind", "modes", "slope", "cutoff", "seed", "scale"}, "datum.", errors);
        if (d.contains("kind")) {
            const std::string kind = d.at("kind").get<std::string>();
            if (kind == "modes")
                cfg.datum.kind = InitialDatumSpec::Kind::modes;
            else if (kind == "random_spectrum")
                cfg.datum.kind = InitialDatumSpec::Kind::random_spectrum;
            else
                errors.push_back("datum.kind must be 'modes' or 'random_spectrum', got '" + kind +
                                 "'");
        }
        if (d.contains("modes")) {
            cfg.datum.modes.clear();
            for (const auto& m : d.at("modes")) {
                reject_unknown(m, {"k", "amplitude", "phase"}, "datum.modes[].", errors);
                DatumMode mode;
                if (m.contains("k")) {
                    auto kv = m.at("k");
                    if (!kv.is_array() || kv.size() != 2) {
                        errors.emplace_back("datum.modes[].k must be a pair of integers");
                    } else {
                        mode.k = {kv[0].get<int>(), kv[1].get<int>()};
                    }
                }
                read(m, "amplitude", mode.amplitude, errors, "datum.modes[].");
                read(m, "phase", mode.phase, errors, "datum.modes[].");
                cfg.datum.modes.push_back(mode);
            }
        }
        read(d, "slope", cfg.datum.slope, errors, "datum.");
        read(d, "cutoff", cfg.datum.cutoff, errors, "datum.");
        read(d, "seed", cfg.datum.seed, errors, "datum.");
        read(d, "scale", cfg.datum.scale, errors, "datum.");
    }
    if (j.contains("probes")) {
        const json& p = j.at("probes");
        reject_unknown(p, {"alphas", "xi_schedule"}, "probes.", errors);
        read(p, "alphas", cfg.probes.alphas, errors, "probes.");
        read(p, "xi_schedule", cfg.probes.xi_schedule, errors, "probes.");
    }
    if (j.contains("theory")) {
        const json& t = j.at("theory");
        reject_unknown(t, {"c0", "c1", "C0", "c_embed"}, "theory.", errors);
        read(t, "c0", cfg.theory.c0, errors, "theory.");
        read(t, "c1", cfg.theory.c1, errors, "theory.");
        read(t, "C0", cfg.theory.C0, errors, "theory.");
        read(t, "c_embed", cfg.theory.c_embed, errors, "theory.");
    }
    if (j.contains("output")) {
        const json& o = j.at("output");
        reject_unknown(o, {"directory", "cadence_steps", "cadence_dt", "snapshots"}, "output.",
                       errors);
        read(o, "directory", cfg.output.directory, errors, "output.");
        read(o, "cadence_steps", cfg.output.cadence_steps, errors, "output.");
        read(o, "cadence_dt", cfg.output.cadence_dt, errors, "output.");
        read(o, "snapshots", cfg.output.snapshots, errors, "output.");
    }
    if (j.contains("seed")) read(j, "seed", cfg.seed, errors, "");

    if (cfg.datum.kind == InitialDatumSpec::Kind::random_spectrum &&
        (!j.contains("datum") || !j.at("datum").contains("seed")))
        cfg.datum.seed = cfg.seed; // derive the phase seed from the run seed

    if (!errors.empty()) {
        std::ostringstream os;
        os << "configuration parse failed (" << errors.size() << " problem"
           << (errors.size() == 1 ? "" : "s") << "):";
        for (const auto& e : errors) os << "\n  - " << e;
        throw ConfigError(os.str());
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return ExperimentConfig::from_json(j);
}

void save_config(const ExperimentConfig& cfg, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write config file: " + path);
    os << cfg.to_json().dump(2) << "\n";
}

void apply_override(json& tree, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override must look like dotted.key=value, got '" + spec + "'");
    const std::string dotted = spec.substr(0, eq);
    const std::string value = spec.substr(eq + 1);

    json* node = &tree;
    std::size_t pos = 0;
    std::string leaf;
    while (true) {
        const auto dot = dotted.find('.', pos);
        const std::string key = dotted.substr(pos, dot == std::string::npos ? dot : dot - pos);
        if (key.empty()) throw ConfigError("override key has an empty segment: '" + dotted + "'");
        if (dot == std::string::npos) {
            leaf = key;
            break;
        }
        if (!node->contains(key))
            throw ConfigError("override addresses unknown key '" + dotted + "'");
        node = &node->at(key);
        pos = dot + 1;
    }
    if (!node->is_object() || !node->contains(leaf))
        throw ConfigError("override addresses unknown key '" + dotted + "'");

    // parse the value as JSON when possible (numbers, bools, arrays), else string
    json parsed;
    try {
        parsed = json::parse(value);
    } catch (const json::parse_error&) {
        parsed = value;
    }
    (*node)[leaf] = parsed;
}

} // namespace sqg

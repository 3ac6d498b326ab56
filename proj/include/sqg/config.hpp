// config.hpp
// Experiment configuration: a strict JSON tree.  Unknown keys are rejected so
// programmatic sweeps cannot silently mistype a parameter, and validation
// reports every violation at once.

#pragma once

#include "sqg/datum.hpp"
#include "sqg/solver.hpp"
#include "sqg/theory.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace sqg {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ProbeConfig {
    std::vector<double> alphas{0.4};
    bool xi_schedule = true; // evaluate v with the theoretical xi(t), else xi = 0
};

struct OutputConfig {
    std::string directory = "out";
    std::uint64_t cadence_steps = 10; // sink every k steps (when cadence_dt == 0)
    double cadence_dt = 0.0;          // sink at multiples of this time, if > 0
    bool snapshots = false;
};

struct ExperimentConfig {
    SolverConfig solver;
    InitialDatumSpec datum;
    ProbeConfig probes;
    theory::UniversalConstants theory;
    OutputConfig output;
    std::uint64_t seed = 0;

    void validate() const; // throws ConfigError listing all violations
    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
};

ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& cfg, const std::string& path);

// Apply "dotted.key=value" to the JSON tree; the key must already exist.
void apply_override(nlohmann::json& tree, const std::string& spec);

} // namespace sqg

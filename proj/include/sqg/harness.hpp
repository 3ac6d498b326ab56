// harness.hpp
// Experiment orchestration: one reproducible run (CSV time series, optional
// SQGF snapshots, JSON report, plot scripts) and parameter sweeps with
// isolated per-point outputs.  Identical config + seed gives byte-identical
// CSV and JSON; wall-clock data lives in a separate metadata file.

#pragma once

#include "sqg/config.hpp"
#include "sqg/diagnostics.hpp"
#include "sqg/solver.hpp"
#include "sqg/theory.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sqg {

struct RunManifest {
    std::string directory;
    std::string csv;
    std::string report;
    std::string meta;
    std::vector<std::string> snapshots;
    std::vector<std::string> plots;
};

struct RiccatiFit {
    double a_fit = 0.0;   // smallest A with dy/dt <= A y^{3-gamma/2} along the samples
    bool bound_holds = false;
    bool valid = false;   // enough samples to fit
};

struct RunReport {
    ExperimentConfig config;
    std::string config_hash;
    Termination termination = Termination::completed;
    theory::DatumNorms datum_norms;
    bool bounds_valid = false; // false at the critical endpoint gamma = 1
    theory::BoundsReport bounds;
    double xi0_primary = 0.0;  // xi schedule for the first probe alpha
    DiagnosticsRecord final_diagnostics;
    RiccatiFit riccati;
    double high_wavenumber_fraction = 0.0;
    std::vector<std::string> warnings;
    RunManifest manifest;
    double wall_clock_seconds = 0.0; // meta file only, never in report.json

    nlohmann::json to_json() const;
};

RunReport run_experiment(const ExperimentConfig& cfg);

struct SweepAxis {
    enum class Kind { gamma, amplitude, n };
    Kind kind = Kind::gamma;
    std::vector<double> values;

    static const char* name(Kind k);
};

struct SweepRow {
    double value = 0.0;
    std::string termination; // run outcome, "bounds_only", or "error: ..."
    theory::DatumNorms norms;
    double alpha = 0.0;
    double t_star_composed = 0.0;
    double t_star_theorem = 0.0;
    double t1 = 0.0;
    double criterion_margin = 0.0;
    bool criterion_holds = false;
    std::string directory;
};

struct SweepReport {
    SweepAxis axis;
    std::vector<SweepRow> rows;
    std::optional<double> crossing_gamma;   // first gamma with t_star_composed <= t1
    std::optional<double> criterion_gamma;  // first gamma where the criterion holds
    std::optional<double> max_stable_amplitude;
    std::string csv, json_path;
    std::vector<std::string> plots;

    nlohmann::json to_json() const;
};

// Runs each point (concurrently when jobs > 1) into an isolated subdirectory
// of base.output.directory; point failures are recorded, not fatal.
// bounds_only skips the PDE and evaluates the closed-form bounds per point.
SweepReport sweep(const ExperimentConfig& base, const SweepAxis& axis, int jobs = 1,
                  bool bounds_only = false);

// Write gnuplot scripts for existing run reports: norms vs t, Holder seminorm
// vs t with the ceiling line, and the xi(t) overlay.  Throws when the list is
// empty or a CSV lacks the needed columns.
std::vector<std::string> emit_plots(const std::vector<std::string>& report_paths);

std::string sha256_hex(const std::string& data);

} // namespace sqg

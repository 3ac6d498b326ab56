// sqg.cpp
// Command-line front end: simulate, bounds, sweep, probe, verify.
// Exit codes are a stable contract: 0 ok, 1 usage/config error, 2 numerical
// blowup, 3 invariant failure.  Machine-readable output goes to stdout as
// JSON; human logs go to stderr.

#include "sqg/config.hpp"
#include "sqg/datum.hpp"
#include "sqg/diagnostics.hpp"
#include "sqg/fft.hpp"
#include "sqg/harness.hpp"
#include "sqg/operators.hpp"
#include "sqg/solver.hpp"
#include "sqg/theory.hpp"
#include "sqg/verify.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using nlohmann::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_blowup = 2;
constexpr int exit_invariant = 3;

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string output_dir;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOpts& c, bool config_required) {
    auto* opt = cmd->add_option("--config", c.config_path, "experiment config (JSON)");
    if (config_required) opt->required();
    cmd->add_option("--set", c.overrides, "override config values, dotted.key=value")
        ->take_all();
    cmd->add_option("--output", c.output_dir, "output directory (overrides config)");
    cmd->add_option("--seed", c.seed, "run seed (overrides config)");
}

sqg::ExperimentConfig load_with_overrides(const CommonOpts& c) {
    std::ifstream is(c.config_path);
    if (!is) throw sqg::ConfigError("cannot open config file: " + c.config_path);
    json tree;
    try {
        tree = json::parse(is);
    } catch (const json::parse_error& e) {
        throw sqg::ConfigError("config parse error in " + c.config_path + ": " + e.what());
    }
    // defaults first so overrides can address keys the file omitted
    json full = sqg::ExperimentConfig::from_json(tree).to_json();
    for (const auto& ov : c.overrides) sqg::apply_override(full, ov);
    if (!c.output_dir.empty()) full["output"]["directory"] = c.output_dir;
    if (c.seed) full["seed"] = *c.seed;
    return sqg::ExperimentConfig::from_json(full);
}

int cmd_simulate(const CommonOpts& common) {
    const sqg::ExperimentConfig cfg = load_with_overrides(common);
    const sqg::RunReport rep = sqg::run_experiment(cfg);
    std::cout << rep.manifest.report << "\n";
    for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
    std::cerr << "termination: " << sqg::to_string(rep.termination) << "\n";
    return rep.termination == sqg::Termination::completed ? exit_ok : exit_blowup;
}

struct BoundsOpts {
    double gamma = 0.0;
    double l2 = 0.0, h2 = 0.0, linf = 0.0;
    double r = 0.0;
    bool gamma1_only = false;
    double c0 = 1.0, c1 = 1.0, C0 = 2.0;
};

int cmd_bounds(const CommonOpts& common, const BoundsOpts& b, const CLI::App* cmd) {
    sqg::theory::UniversalConstants consts;
    consts.c0 = b.c0;
    consts.c1 = b.c1;
    consts.C0 = b.C0;

    double gamma = b.gamma;
    sqg::theory::DatumNorms norms;
    if (!common.config_path.empty()) {
        const sqg::ExperimentConfig cfg = load_with_overrides(common);
        consts = cfg.theory;
        if (!cmd->count("--gamma")) gamma = cfg.solver.gamma;
        const sqg::Grid grid = sqg::Grid::of(cfg.solver.n);
        const sqg::SolverState st =
            sqg::make_state(sqg::build_datum(cfg.datum, grid), cfg.solver);
        norms.l2 = std::sqrt(st.theta_hat.l2_norm_sq());
        norms.h2 = sqg::sobolev_norm(st.theta_hat, 2.0);
        norms.linf = sqg::inverse_transform(st.theta_hat).max_abs();
    } else {
        norms.l2 = b.l2;
        norms.h2 = b.h2;
        norms.linf = b.linf;
    }

    if (b.gamma1_only) {
        const double r = b.r > 0.0 ? b.r : norms.critical_size(gamma);
        if (!(r > 0.0)) throw std::invalid_argument("--gamma1-only needs --R or datum norms");
        const auto g1 = sqg::theory::gamma1(r, consts);
        json out;
        out["R"] = r;
        out["gamma1"] = g1.gamma1;
        out["saturated_low"] = g1.saturated_low;
        out["never_holds"] = g1.never_holds;
        out["constants"] = {{"c0", consts.c0}, {"c1", consts.c1}, {"C0", consts.C0}};
        std::cout << out.dump(2) << "\n";
        return exit_ok;
    }

    if (!(norms.l2 > 0.0 && norms.h2 > 0.0 && norms.linf > 0.0))
        throw std::invalid_argument("bounds needs positive --l2, --h2 and --linf (or --config)");
    const auto rep = sqg::theory::certify(norms, gamma, consts, true);
    std::cout << rep.to_json().dump(2) << "\n";
    if (norms.embedding_violated(consts))
        std::cerr << "warning: supplied norms violate the L^inf embedding bound\n";
    return exit_ok;
}

int cmd_sweep(const CommonOpts& common, const std::string& axis_name,
              const std::vector<double>& values, int jobs, bool bounds_only) {
    sqg::ExperimentConfig base = load_with_overrides(common);
    sqg::SweepAxis axis;
    if (axis_name == "gamma")
        axis.kind = sqg::SweepAxis::Kind::gamma;
    else if (axis_name == "amplitude")
        axis.kind = sqg::SweepAxis::Kind::amplitude;
    else if (axis_name == "n")
        axis.kind = sqg::SweepAxis::Kind::n;
    else
        throw std::invalid_argument("--axis must be gamma, amplitude or n");
    axis.values = values;
    const sqg::SweepReport rep = sqg::sweep(base, axis, jobs, bounds_only);
    std::cout << rep.json_path << "\n";
    int failures = 0;
    for (const auto& r : rep.rows)
        if (r.termination.rfind("error", 0) == 0) ++failures;
    if (failures) std::cerr << failures << " sweep point(s) failed; see " << rep.csv << "\n";
    return exit_ok;
}

int cmd_probe(const CommonOpts& common) {
    const sqg::ExperimentConfig cfg = load_with_overrides(common);
    const sqg::Grid grid = sqg::Grid::of(cfg.solver.n);
    const sqg::SolverState st = sqg::make_state(sqg::build_datum(cfg.datum, grid), cfg.solver);
    const sqg::ScalarField theta = sqg::inverse_transform(st.theta_hat);
    const double gamma = cfg.solver.gamma;

    json out;
    out["norms"] = {{"l2", std::sqrt(st.theta_hat.l2_norm_sq())},
                    {"linf", theta.max_abs()},
                    {"h2", sqg::sobolev_norm(st.theta_hat, 2.0)},
                    {"h_gamma_half", sqg::sobolev_norm(st.theta_hat, gamma / 2.0)}};

    const sqg::ShiftSet shifts = sqg::ShiftSet::default_for(grid);
    const sqg::ShiftAmplitudes amps = sqg::compute_shift_amplitudes(theta, shifts);
    json holder = json::object();
    json c0 = json::object();
    for (double a : cfg.probes.alphas) {
        std::ostringstream key;
        key << a;
        holder[key.str()] = sqg::v_sup_from(amps, a, 0.0).sup;
        if (gamma < 1.0 && a > 1.0 - gamma)
            c0[key.str()] = sqg::nonlinear_bound_probe(theta, gamma, a, shifts);
    }
    out["holder_seminorm"] = holder;
    out["empirical_c0"] = c0;

    const auto v = sqg::v_sup_from(amps, cfg.probes.alphas.front(), 0.0);
    out["v_sup"] = v.sup;
    out["v_argmax"] = {{"x", {v.argmax_x[0], v.argmax_x[1]}},
                       {"shift", {v.argmax_shift[0], v.argmax_shift[1]}}};

    const sqg::ScalarField d = sqg::dissipation_functional(theta, gamma);
    double dmin = 0.0;
    for (double x : d.values) dmin = std::min(dmin, x);
    out["dgamma_min"] = dmin;
    std::cout << out.dump(2) << "\n";
    return exit_ok;
}

int cmd_verify(const CommonOpts& common, const std::string& check, int lambda,
               bool inject_flip) {
    sqg::verify::VerifyOptions opt;
    if (!common.config_path.empty()) {
        const sqg::ExperimentConfig cfg = load_with_overrides(common);
        opt.n = cfg.solver.n;
        opt.gamma = cfg.solver.gamma;
        opt.t_end = cfg.solver.t_end;
        opt.seed = cfg.seed != 0 ? cfg.seed : opt.seed;
        opt.flip_dissipation_sign = cfg.solver.flip_dissipation_sign;
    }
    if (lambda > 0) opt.lambda = lambda;
    if (inject_flip) opt.flip_dissipation_sign = true;

    std::vector<sqg::verify::CheckResult> results;
    if (check.empty())
        results = sqg::verify::run_all(opt);
    else
        results.push_back(sqg::verify::run_one(check, opt));

    json out = json::array();
    bool all_pass = true;
    for (const auto& r : results) {
        out.push_back({{"name", r.name},
                       {"pass", r.pass},
                       {"measured", r.measured},
                       {"threshold", r.threshold},
                       {"detail", r.detail}});
        all_pass = all_pass && r.pass;
        std::ostringstream line;
        line << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  measured=" << r.measured
             << " threshold=" << r.threshold << "  (" << r.detail << ")";
        std::cerr << line.str() << "\n";
    }
    std::cout << out.dump(2) << "\n";
    return all_pass ? exit_ok : exit_invariant;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fractionally dissipative SQG simulator and bounds engine"};
    app.require_subcommand(1);

    CommonOpts sim_common, bounds_common, sweep_common, probe_common, verify_common;

    auto* sim = app.add_subcommand("simulate", "run one experiment from a config");
    add_common(sim, sim_common, true);

    auto* bnd = app.add_subcommand("bounds", "evaluate the closed-form theory bounds");
    add_common(bnd, bounds_common, false);
    BoundsOpts bo;
    bnd->add_option("--gamma", bo.gamma, "dissipation exponent in (0,1)");
    bnd->add_option("--l2", bo.l2, "datum L2 norm");
    bnd->add_option("--h2", bo.h2, "datum homogeneous H2 norm");
    bnd->add_option("--linf", bo.linf, "datum L-infinity norm");
    bnd->add_option("--R", bo.r, "critical size for --gamma1-only");
    bnd->add_flag("--gamma1-only", bo.gamma1_only, "only compute gamma1(R)");
    bnd->add_option("--c0", bo.c0, "nonlinear lower-bound constant");
    bnd->add_option("--c1", bo.c1, "xi0 constant (>= 1)");
    bnd->add_option("--C0", bo.C0, "local-existence / criterion constant");

    auto* swp = app.add_subcommand("sweep", "run a parameter sweep");
    add_common(swp, sweep_common, true);
    std::string axis_name = "gamma";
    std::vector<double> axis_values;
    int jobs = 1;
    bool bounds_only = false;
    swp->add_option("--axis", axis_name, "gamma | amplitude | n")->required();
    swp->add_option("--values", axis_values, "axis values")->required()->delimiter(',');
    swp->add_option("--jobs", jobs, "concurrent sweep points");
    swp->add_flag("--bounds-only", bounds_only, "skip the PDE, evaluate bounds per point");

    auto* prb = app.add_subcommand("probe", "diagnostics of the configured datum");
    add_common(prb, probe_common, true);

    auto* ver = app.add_subcommand("verify", "run the built-in invariant suite");
    add_common(ver, verify_common, false);
    std::string check_name;
    int lambda = 0;
    bool inject_flip = false;
    ver->add_option("--check", check_name, "run a single named check");
    ver->add_option("--lambda", lambda, "scaling-symmetry factor");
    ver->add_flag("--inject-flip-dissipation", inject_flip,
                  "fault injection: flip the dissipation sign (checks must fail)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_usage;
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_common);
        if (bnd->parsed()) return cmd_bounds(bounds_common, bo, bnd);
        if (swp->parsed())
            return cmd_sweep(sweep_common, axis_name, axis_values, jobs, bounds_only);
        if (prb->parsed()) return cmd_probe(probe_common);
        if (ver->parsed()) return cmd_verify(verify_common, check_name, lambda, inject_flip);
    } catch (const sqg::NumericsError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_blowup;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}

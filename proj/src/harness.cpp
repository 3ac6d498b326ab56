#include "sqg/harness.hpp"

#include "sqg/fft.hpp"
#include "sqg/snapshot.hpp"

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace sqg {

namespace fs = std::filesystem;
using nlohmann::json;

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("sha256 failed");
    }
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

DiagnosticsRecord make_record(const SolverState& state, const ExperimentConfig& cfg,
                              double l2_0_sq, double xi0_primary, bool bounds_valid) {
    DiagnosticsRecord rec;
    rec.t = state.t;
    const ScalarField theta = inverse_transform(state.theta_hat);
    rec.l2 = std::sqrt(state.theta_hat.l2_norm_sq());
    rec.linf = theta.max_abs();

    const double g = state.gamma;
    rec.sobolev[g / 2.0] = sobolev_norm(state.theta_hat, g / 2.0);
    rec.sobolev[2.0] = sobolev_norm(state.theta_hat, 2.0);
    rec.sobolev[2.0 + g / 2.0] = sobolev_norm(state.theta_hat, 2.0 + g / 2.0);

    const ShiftSet shifts = ShiftSet::default_for(theta.grid);
    const ShiftAmplitudes amps = compute_shift_amplitudes(theta, shifts);
    for (double a : cfg.probes.alphas)
        rec.holder.emplace_back(a, v_sup_from(amps, a, 0.0).sup);

    double xi = 0.0;
    if (cfg.probes.xi_schedule && bounds_valid && xi0_primary > 0.0)
        xi = theory::xi_trajectory(state.t, xi0_primary, g, cfg.probes.alphas.front(),
                                   cfg.theory);
    rec.v_sup = v_sup_from(amps, cfg.probes.alphas.front(), xi).sup;

    rec.energy_residual =
        l2_0_sq > 0.0
            ? std::abs(rec.l2 * rec.l2 - l2_0_sq + 2.0 * state.dissipation_integral) / l2_0_sq
            : 0.0;

    const ScalarField dg = dissipation_functional(theta, g);
    double dmin = 0.0;
    for (double v : dg.values) dmin = std::min(dmin, v);
    rec.dgamma_min = dmin;
    return rec;
}

RiccatiFit fit_riccati(const std::vector<std::pair<double, double>>& h2_samples, double gamma) {
    RiccatiFit fit;
    if (h2_samples.size() < 2) return fit;
    const double p = 3.0 - gamma / 2.0;
    double a_fit = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < h2_samples.size(); ++i) {
        const auto [t0, y0] = h2_samples[i];
        const auto [t1, y1] = h2_samples[i + 1];
        if (!(t1 > t0) || !(y0 > 0.0)) continue;
        a_fit = std::max(a_fit, (y1 - y0) / ((t1 - t0) * std::pow(y0, p)));
    }
    if (!std::isfinite(a_fit)) return fit;
    fit.valid = true;
    fit.a_fit = a_fit;
    if (a_fit <= 0.0) {
        // nonincreasing H^2 norm; the growth bound holds trivially
        fit.bound_holds = true;
        return fit;
    }
    const double y0 = h2_samples.front().second;
    const double t_base = h2_samples.front().first;
    fit.bound_holds = true;
    for (const auto& [t, y] : h2_samples) {
        const auto b = theory::h2_growth_bound(t - t_base, y0, gamma, a_fit);
        if (!b.diverged && y > b.value * (1.0 + 1e-6)) fit.bound_holds = false;
    }
    return fit;
}

void write_norms_plot(const std::string& path, const std::string& csv) {
    std::ofstream os(path);
    os << "# gnuplot script: norms vs time\n"
       << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set xlabel 't'\n"
       << "set ylabel 'norm'\n"
       << "set logscale y\n"
       << "plot '" << csv << "' using 1:2 with lines title 'L2', \\\n"
       << "     '" << csv << "' using 1:3 with lines title 'Linf', \\\n"
       << "     '" << csv << "' using 1:5 with lines title 'H2'\n";
}

void write_holder_plot(const std::string& path, const std::string& csv, int n_alphas,
                       double m_ceiling) {
    std::ofstream os(path);
    os << "# gnuplot script: Holder seminorm estimates vs time, with the eventual ceiling\n"
       << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set xlabel 't'\n"
       << "set ylabel '[theta]_{C^a}'\n";
    os << "plot ";
    for (int i = 0; i < n_alphas; ++i)
        os << "'" << csv << "' using 1:" << 7 + i << " with lines, \\\n     ";
    os << m_ceiling << " with lines dashtype 2 title 'ceiling M'\n";
}

void write_xi_plot(const std::string& path, const std::string& csv, double xi0, double gamma,
                   double alpha, double c_star) {
    const double slope = gamma * c_star / alpha;
    std::ofstream os(path);
    os << "# gnuplot script: the regularization parameter xi(t) next to v_sup\n"
       << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set xlabel 't'\n"
       << "xi(t) = (" << fmt17(std::pow(xi0, gamma)) << " - " << fmt17(slope)
       << "*t) > 0 ? (" << fmt17(std::pow(xi0, gamma)) << " - " << fmt17(slope)
       << "*t)**(" << fmt17(1.0 / gamma) << ") : 0\n"
       << "plot xi(x) with lines title 'xi(t)', \\\n"
       << "     '" << csv << "' using 1:(column('v_sup')) with lines title 'v_sup'\n";
}

std::vector<std::string> split_csv_header(const std::string& line) {
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) cols.push_back(item);
    return cols;
}

} // namespace

json RunReport::to_json() const {
    json j;
    j["config"] = config.to_json();
    j["config_hash"] = config_hash;
    j["termination"] = to_string(termination);
    j["datum_norms"] = {{"l2", datum_norms.l2},
                        {"h2", datum_norms.h2},
                        {"linf", datum_norms.linf},
                        {"R", datum_norms.critical_size(config.solver.gamma)}};
    j["bounds_valid"] = bounds_valid;
    if (bounds_valid) j["bounds"] = bounds.to_json();
    j["xi0_primary"] = xi0_primary;
    json fin;
    fin["t"] = final_diagnostics.t;
    fin["l2"] = final_diagnostics.l2;
    fin["linf"] = final_diagnostics.linf;
    for (const auto& [s, v] : final_diagnostics.sobolev) fin["h_" + fmt17(s)] = v;
    for (const auto& [a, v] : final_diagnostics.holder) fin["holder_" + fmt17(a)] = v;
    fin["v_sup"] = final_diagnostics.v_sup;
    fin["energy_residual"] = final_diagnostics.energy_residual;
    fin["dgamma_min"] = final_diagnostics.dgamma_min;
    j["final_diagnostics"] = fin;
    j["riccati_fit"] = {{"valid", riccati.valid},
                        {"A_fit", riccati.a_fit},
                        {"bound_holds", riccati.bound_holds}};
    j["resolution_check"] = {{"high_wavenumber_fraction", high_wavenumber_fraction}};
    j["warnings"] = warnings;
    j["manifest"] = {{"directory", manifest.directory},
                     {"csv", manifest.csv},
                     {"report", manifest.report},
                     {"meta", manifest.meta},
                     {"snapshots", manifest.snapshots},
                     {"plots", manifest.plots}};
    return j;
}

RunReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto t_begin = std::chrono::steady_clock::now();

    RunReport rep;
    rep.config = cfg;
    rep.config_hash = sha256_hex(cfg.to_json().dump());

    fs::create_directories(cfg.output.directory);
    rep.manifest.directory = cfg.output.directory;
    rep.manifest.csv = (fs::path(cfg.output.directory) / "series.csv").string();
    rep.manifest.report = (fs::path(cfg.output.directory) / "report.json").string();
    rep.manifest.meta = (fs::path(cfg.output.directory) / "meta.json").string();

    const Grid grid = Grid::of(cfg.solver.n);
    const ScalarField datum = build_datum(cfg.datum, grid);

    // measured norms of the state that actually evolves
    const SolverState state0 = make_state(datum, cfg.solver);
    rep.datum_norms.l2 = std::sqrt(state0.theta_hat.l2_norm_sq());
    rep.datum_norms.h2 = sobolev_norm(state0.theta_hat, 2.0);
    rep.datum_norms.linf = inverse_transform(state0.theta_hat).max_abs();
    if (rep.datum_norms.embedding_violated(cfg.theory))
        rep.warnings.push_back("datum norms violate the L^inf embedding check");

    rep.bounds_valid = cfg.solver.gamma < 1.0;
    if (rep.bounds_valid) {
        rep.bounds = theory::certify(rep.datum_norms, cfg.solver.gamma, cfg.theory, true);
        const double a0 = cfg.probes.alphas.front();
        if (rep.datum_norms.linf > 0.0 && a0 > 1.0 - cfg.solver.gamma)
            rep.xi0_primary = theory::xi0(cfg.solver.gamma, a0, rep.datum_norms.linf, cfg.theory);
    }

    std::ofstream csv(rep.manifest.csv);
    if (!csv) throw std::runtime_error("cannot open " + rep.manifest.csv + " for writing");
    csv << diagnostics_csv_header(cfg.probes.alphas) << "\n";

    const double l2_0_sq = rep.datum_norms.l2 * rep.datum_norms.l2;
    std::vector<std::pair<double, double>> h2_samples;
    DiagnosticsRecord last;
    auto sink = [&](const SolverState& st) {
        DiagnosticsRecord rec = make_record(st, cfg, l2_0_sq, rep.xi0_primary, rep.bounds_valid);
        csv << diagnostics_csv_row(rec) << "\n";
        csv.flush(); // keep partial output parseable if the run dies
        h2_samples.emplace_back(rec.t, rec.sobolev.at(2.0));
        if (cfg.output.snapshots) {
            char name[32];
            std::snprintf(name, sizeof name, "snap_%08llu.sqgf",
                          static_cast<unsigned long long>(st.step_count));
            const std::string path = (fs::path(cfg.output.directory) / name).string();
            write_snapshot(path, inverse_transform(st.theta_hat), st.gamma, st.t);
            rep.manifest.snapshots.push_back(path);
        }
        last = std::move(rec);
    };

    SinkCadence cadence;
    cadence.every_steps = cfg.output.cadence_dt > 0.0 ? 0 : cfg.output.cadence_steps;
    cadence.every_dt = cfg.output.cadence_dt;

    RunOutcome outcome = run(datum, cfg.solver, sink, cadence);
    rep.termination = outcome.reason;
    rep.high_wavenumber_fraction = outcome.high_wavenumber_fraction;
    for (const auto& w : outcome.warnings) rep.warnings.push_back(w);
    rep.final_diagnostics = last;
    rep.riccati = fit_riccati(h2_samples, cfg.solver.gamma);
    csv.close();

    // plot scripts next to the data
    {
        const std::string dir = cfg.output.directory;
        const std::string norms_gp = (fs::path(dir) / "norms.gp").string();
        const std::string holder_gp = (fs::path(dir) / "holder.gp").string();
        const std::string xi_gp = (fs::path(dir) / "xi.gp").string();
        write_norms_plot(norms_gp, "series.csv");
        write_holder_plot(holder_gp, "series.csv", static_cast<int>(cfg.probes.alphas.size()),
                          rep.bounds_valid ? rep.bounds.m_ceiling : 0.0);
        write_xi_plot(xi_gp, "series.csv", rep.xi0_primary, cfg.solver.gamma,
                      cfg.probes.alphas.front(), cfg.theory.c_star());
        rep.manifest.plots = {norms_gp, holder_gp, xi_gp};
    }

    {
        std::ofstream os(rep.manifest.report);
        os << rep.to_json().dump(2) << "\n";
    }
    rep.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
    {
        std::ofstream os(rep.manifest.meta);
        json meta;
        meta["wall_clock_seconds"] = rep.wall_clock_seconds;
        const auto now = std::chrono::system_clock::now().time_since_epoch();
        meta["unix_time"] = std::chrono::duration<double>(now).count();
        os << meta.dump(2) << "\n";
    }
    return rep;
}

const char* SweepAxis::name(Kind k) {
    switch (k) {
        case Kind::gamma: return "gamma";
        case Kind::amplitude: return "amplitude";
        case Kind::n: return "n";
    }
    return "unknown";
}

json SweepReport::to_json() const {
    json j;
    j["axis"] = SweepAxis::name(axis.kind);
    j["values"] = axis.values;
    json rows_j = json::array();
    for (const auto& r : rows) {
        rows_j.push_back({{"value", r.value},
                          {"termination", r.termination},
                          {"l2", r.norms.l2},
                          {"h2", r.norms.h2},
                          {"linf", r.norms.linf},
                          {"alpha", r.alpha},
                          {"t_star_composed", r.t_star_composed},
                          {"t_star_theorem", r.t_star_theorem},
                          {"t1", r.t1},
                          {"criterion_margin", r.criterion_margin},
                          {"criterion_holds", r.criterion_holds},
                          {"directory", r.directory}});
    }
    j["rows"] = rows_j;
    if (crossing_gamma) j["crossing_gamma"] = *crossing_gamma;
    if (criterion_gamma) j["criterion_gamma"] = *criterion_gamma;
    if (max_stable_amplitude) j["max_stable_amplitude"] = *max_stable_amplitude;
    return j;
}

SweepReport sweep(const ExperimentConfig& base, const SweepAxis& axis, int jobs,
                  bool bounds_only) {
    if (axis.values.empty()) throw std::invalid_argument("sweep: axis has no values");
    if (jobs < 1) jobs = 1;
    base.validate();
    fs::create_directories(base.output.directory);

    SweepReport rep;
    rep.axis = axis;
    rep.rows.resize(axis.values.size());

    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t idx = cursor.fetch_add(1);
            if (idx >= axis.values.size()) return;
            const double value = axis.values[idx];
            SweepRow row;
            row.value = value;

            ExperimentConfig cfg = base;
            switch (axis.kind) {
                case SweepAxis::Kind::gamma: cfg.solver.gamma = value; break;
                case SweepAxis::Kind::amplitude: cfg.datum.scale = value; break;
                case SweepAxis::Kind::n: cfg.solver.n = static_cast<int>(value); break;
            }
            char sub[32];
            std::snprintf(sub, sizeof sub, "point_%03zu", idx);
            cfg.output.directory = (fs::path(base.output.directory) / sub).string();
            row.directory = cfg.output.directory;

            try {
                if (bounds_only) {
                    cfg.validate();
                    const Grid grid = Grid::of(cfg.solver.n);
                    const SolverState st = make_state(build_datum(cfg.datum, grid), cfg.solver);
                    row.norms.l2 = std::sqrt(st.theta_hat.l2_norm_sq());
                    row.norms.h2 = sobolev_norm(st.theta_hat, 2.0);
                    row.norms.linf = inverse_transform(st.theta_hat).max_abs();
                    row.termination = "bounds_only";
                } else {
                    const RunReport rr = run_experiment(cfg);
                    row.norms = rr.datum_norms;
                    row.termination = to_string(rr.termination);
                }
                if (cfg.solver.gamma < 1.0) {
                    const auto b = theory::certify(row.norms, cfg.solver.gamma, cfg.theory);
                    row.alpha = b.alpha;
                    row.t_star_composed = b.t_star_composed;
                    row.t_star_theorem = b.t_star_theorem;
                    row.t1 = b.t1;
                    row.criterion_margin = b.criterion_margin;
                    row.criterion_holds = b.criterion_holds;
                }
            } catch (const std::exception& e) {
                row.termination = std::string("error: ") + e.what();
            }
            rep.rows[idx] = std::move(row);
        }
    };

    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // fixed-order aggregation
    if (axis.kind == SweepAxis::Kind::gamma) {
        for (const auto& r : rep.rows) {
            if (!rep.crossing_gamma && r.t_star_composed > 0.0 && r.t_star_composed <= r.t1)
                rep.crossing_gamma = r.value;
            if (!rep.criterion_gamma && r.criterion_holds) rep.criterion_gamma = r.value;
        }
    }
    if (axis.kind == SweepAxis::Kind::amplitude) {
        for (const auto& r : rep.rows)
            if (r.termination == "completed")
                rep.max_stable_amplitude =
                    std::max(rep.max_stable_amplitude.value_or(r.value), r.value);
    }

    rep.csv = (fs::path(base.output.directory) / "sweep.csv").string();
    {
        std::ofstream os(rep.csv);
        os << SweepAxis::name(axis.kind)
           << ",termination,l2,h2,linf,alpha,t_star_composed,t_star_theorem,t1,criterion_margin,"
              "criterion_holds\n";
        for (const auto& r : rep.rows)
            os << fmt17(r.value) << "," << r.termination << "," << fmt17(r.norms.l2) << ","
               << fmt17(r.norms.h2) << "," << fmt17(r.norms.linf) << "," << fmt17(r.alpha) << ","
               << fmt17(r.t_star_composed) << "," << fmt17(r.t_star_theorem) << ","
               << fmt17(r.t1) << "," << fmt17(r.criterion_margin) << ","
               << (r.criterion_holds ? 1 : 0) << "\n";
    }
    rep.json_path = (fs::path(base.output.directory) / "sweep.json").string();
    {
        std::ofstream os(rep.json_path);
        os << rep.to_json().dump(2) << "\n";
    }

    if (axis.kind == SweepAxis::Kind::gamma) {
        const std::string gp = (fs::path(base.output.directory) / "tstar_t1.gp").string();
        std::ofstream os(gp);
        os << "# gnuplot script: eventual-regularity time vs local-existence time\n"
           << "set datafile separator ','\n"
           << "set key autotitle columnhead\n"
           << "set xlabel 'gamma'\n"
           << "set logscale y\n";
        if (rep.crossing_gamma)
            os << "set arrow from " << fmt17(*rep.crossing_gamma)
               << ", graph 0 to " << fmt17(*rep.crossing_gamma)
               << ", graph 1 nohead dashtype 3\n"
               << "set label 'T* <= T1 from here' at " << fmt17(*rep.crossing_gamma)
               << ", graph 0.95\n";
        os << "plot 'sweep.csv' using 1:7 with linespoints title 'T* (composed)', \\\n"
           << "     'sweep.csv' using 1:9 with linespoints title 'T1'\n";
        rep.plots.push_back(gp);
    }
    return rep;
}

std::vector<std::string> emit_plots(const std::vector<std::string>& report_paths) {
    if (report_paths.empty()) throw std::invalid_argument("emit_plots: nothing to plot");
    std::vector<std::string> written;
    for (const auto& rp : report_paths) {
        std::ifstream is(rp);
        if (!is) throw std::runtime_error("emit_plots: cannot open report " + rp);
        json j = json::parse(is);
        const std::string dir = j.at("manifest").at("directory").get<std::string>();
        const std::string csv = j.at("manifest").at("csv").get<std::string>();

        std::ifstream cs(csv);
        if (!cs) throw std::runtime_error("emit_plots: cannot open CSV " + csv);
        std::string header;
        std::getline(cs, header);
        const auto cols = split_csv_header(header);
        auto need = [&](const std::string& c) {
            for (const auto& x : cols)
                if (x == c) return;
            throw std::runtime_error("emit_plots: CSV " + csv + " lacks column '" + c + "'");
        };
        need("t");
        need("l2");
        need("linf");
        need("h2");
        need("v_sup");
        int n_alphas = 0;
        for (const auto& c : cols)
            if (c.rfind("holder_", 0) == 0) ++n_alphas;
        if (n_alphas == 0)
            throw std::runtime_error("emit_plots: CSV " + csv + " lacks holder columns");

        const double m_ceiling =
            j.contains("bounds") ? j.at("bounds").at("M").get<double>() : 0.0;
        const double xi0 = j.at("xi0_primary").get<double>();
        const double gamma = j.at("config").at("solver").at("gamma").get<double>();
        const double alpha0 = j.at("config").at("probes").at("alphas").at(0).get<double>();
        const double c_star =
            1.0 / (16.0 * j.at("config").at("theory").at("c0").get<double>());

        const std::string norms_gp = (fs::path(dir) / "norms.gp").string();
        const std::string holder_gp = (fs::path(dir) / "holder.gp").string();
        const std::string xi_gp = (fs::path(dir) / "xi.gp").string();
        write_norms_plot(norms_gp, "series.csv");
        write_holder_plot(holder_gp, "series.csv", n_alphas, m_ceiling);
        write_xi_plot(xi_gp, "series.csv", xi0, gamma, alpha0, c_star);
        written.insert(written.end(), {norms_gp, holder_gp, xi_gp});
    }
    return written;
}

} // namespace sqg

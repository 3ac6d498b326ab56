#include "sqg/verify.hpp"

#include "sqg/datum.hpp"
#include "sqg/diagnostics.hpp"
#include "sqg/fft.hpp"
#include "sqg/operators.hpp"
#include "sqg/solver.hpp"
#include "sqg/theory.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace sqg::verify {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

ScalarField mode_field(const Grid& g, int k1, int k2, double amp, double phase) {
    InitialDatumSpec spec;
    spec.modes = {{{k1, k2}, amp, phase}};
    return build_datum(spec, g);
}

ScalarField random_field(const Grid& g, int cutoff, double slope, std::uint64_t seed,
                         double target_linf = 1.0) {
    InitialDatumSpec spec;
    spec.kind = InitialDatumSpec::Kind::random_spectrum;
    spec.cutoff = cutoff;
    spec.slope = slope;
    spec.seed = seed;
    ScalarField f = build_datum(spec, g);
    const double m = f.max_abs();
    if (m > 0.0 && target_linf > 0.0)
        for (double& v : f.values) v *= target_linf / m;
    return f;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

} // namespace

CheckResult check_operator_exactness(int n) {
    const Grid g = Grid::of(n);
    double worst = 0.0;

    const std::array<std::array<int, 2>, 3> ks{{{1, 0}, {0, 2}, {3, -2}}};
    for (const auto& k : ks) {
        const double mod = two_pi * std::hypot(static_cast<double>(k[0]), k[1]);
        const ScalarField f = mode_field(g, k[0], k[1], 1.0, 0.3);
        const SpectralField F = forward_transform(f);
        for (double sigma : {0.5, 0.8, 1.0, 2.0}) {
            const ScalarField lf = inverse_transform(fractional_laplacian(F, sigma));
            const double mult = std::pow(mod, sigma);
            double err = 0.0;
            for (std::size_t i = 0; i < lf.values.size(); ++i)
                err = std::max(err, std::abs(lf.values[i] - mult * f.values[i]));
            worst = std::max(worst, err / mult);
        }
    }

    // gradient of sin(2 pi x1) is (2 pi cos(2 pi x1), 0)
    {
        const ScalarField f = mode_field(g, 1, 0, 1.0, -std::numbers::pi / 2.0);
        const VectorSpectralField gr = gradient(forward_transform(f));
        const ScalarField g1 = inverse_transform(gr.u1);
        const ScalarField g2 = inverse_transform(gr.u2);
        double err = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x1 = static_cast<double>(i) / n;
            const double want = two_pi * std::cos(two_pi * x1);
            for (int j = 0; j < n; ++j) {
                err = std::max(err, std::abs(g1.at(i, j) - want));
                err = std::max(err, std::abs(g2.at(i, j)));
            }
        }
        worst = std::max(worst, err / two_pi);
    }

    // Riesz velocity of sin(2 pi x1) is (0, cos(2 pi x1)); divergence exactly 0
    {
        const ScalarField f = mode_field(g, 1, 0, 1.0, -std::numbers::pi / 2.0);
        const VectorSpectralField u = riesz_perp_velocity(forward_transform(f));
        if (u.divergence_max_abs() != 0.0) {
            return {"operators", false, u.divergence_max_abs(), 0.0,
                    "Riesz velocity has nonzero spectral divergence"};
        }
        const ScalarField u1 = inverse_transform(u.u1);
        const ScalarField u2 = inverse_transform(u.u2);
        double err = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x1 = static_cast<double>(i) / n;
            const double want = std::cos(two_pi * x1);
            for (int j = 0; j < n; ++j) {
                err = std::max(err, std::abs(u1.at(i, j)));
                err = std::max(err, std::abs(u2.at(i, j) - want));
            }
        }
        worst = std::max(worst, err);
    }

    return {"operators", worst <= 1e-12, worst, 1e-12,
            "max scaled error over eigenfunction tests"};
}

CheckResult check_linear_decay(int n, double t_end) {
    const Grid g = Grid::of(n);
    double worst = 0.0;
    for (double gamma : {0.6, 0.9}) {
        InitialDatumSpec spec;
        spec.modes = {{{1, 0}, 1.0, 0.0}, {{0, 3}, 0.5, 1.1}, {{2, 2}, 0.25, -0.4}};
        const ScalarField datum = build_datum(spec, g);
        const SpectralField F0 = forward_transform(datum);

        SolverConfig cfg;
        cfg.n = n;
        cfg.gamma = gamma;
        cfg.t_end = t_end;
        cfg.dt_max = 0.02;
        cfg.linear_only = true;
        const RunOutcome out = run(datum, cfg);

        for (int i = 0; i < n; ++i) {
            const double k1 = g.wavenumber(i);
            for (int j = 0; j < n; ++j) {
                const double k2 = g.wavenumber(j);
                const std::complex<double> c0 = F0.at(i, j);
                if (std::abs(c0) < 1e-14) continue;
                const double decay =
                    std::exp(-std::pow(two_pi * std::hypot(k1, k2), gamma) * out.final_state.t);
                const std::complex<double> want = decay * c0;
                worst = std::max(worst,
                                 std::abs(out.final_state.theta_hat.at(i, j) - want) /
                                     std::abs(want));
            }
        }
    }
    return {"linear_decay", worst <= 1e-10, worst, 1e-10,
            "max per-mode relative error vs exact exponential decay"};
}

namespace {

RunOutcome smooth_run(const VerifyOptions& opt, std::vector<NormSample>* balance = nullptr) {
    const Grid g = Grid::of(opt.n);
    const ScalarField datum = random_field(g, std::max(4, opt.n / 16), 4.0, opt.seed, 1.0);
    SolverConfig cfg;
    cfg.n = opt.n;
    cfg.gamma = opt.gamma;
    cfg.t_end = opt.t_end;
    cfg.flip_dissipation_sign = opt.flip_dissipation_sign;
    cfg.blowup_threshold = 100.0; // let the checks see the violation, not the abort
    if (balance) {
        const double l2_0_sq = [&] {
            const SolverState s0 = make_state(datum, cfg);
            return s0.theta_hat.l2_norm_sq();
        }();
        auto sink = [&, l2_0_sq](const SolverState& st) {
            const double l2sq = st.theta_hat.l2_norm_sq();
            const double res =
                std::abs(l2sq - l2_0_sq + 2.0 * st.dissipation_integral) / l2_0_sq;
            balance->push_back({st.t, res, std::sqrt(l2sq)});
        };
        return run(datum, cfg, sink, SinkCadence{5, 0.0});
    }
    return run(datum, cfg);
}

} // namespace

CheckResult check_maximum_principle(const VerifyOptions& opt) {
    const RunOutcome out = smooth_run(opt);
    double running = out.linf0;
    double worst = 0.0;
    for (const auto& s : out.history) {
        worst = std::max(worst, (s.linf - running) / out.linf0);
        running = std::min(running, s.linf);
    }
    const double thr = 1e-6;
    std::ostringstream det;
    det << "max increase of |theta|_inf over its running minimum, relative to t=0 ("
        << to_string(out.reason) << ")";
    return {"max_principle", worst <= thr, worst, thr, det.str()};
}

CheckResult check_energy_balance(const VerifyOptions& opt) {
    std::vector<NormSample> balance;
    const RunOutcome out = smooth_run(opt, &balance);
    double worst = 0.0;
    for (const auto& b : balance) worst = std::max(worst, b.linf); // residual stored in linf slot
    (void)out;
    return {"energy_balance", worst <= 1e-6, worst, 1e-6,
            "max relative L2 balance residual along the run"};
}

CheckResult check_scaling_symmetry(const VerifyOptions& opt) {
    const Grid g = Grid::of(opt.n);
    const int lambda = opt.lambda;
    const double gamma = opt.gamma;
    const double amp = 0.5;

    InitialDatumSpec base;
    base.modes = {{{1, 0}, amp, -std::numbers::pi / 2.0}, {{1, 1}, amp, 0.0}};
    InitialDatumSpec scaled;
    const double amp_l = amp * std::pow(static_cast<double>(lambda), gamma - 1.0);
    scaled.modes = {{{lambda, 0}, amp_l, -std::numbers::pi / 2.0},
                    {{lambda, lambda}, amp_l, 0.0}};

    const double rate = std::pow(static_cast<double>(lambda), gamma);
    const double t_b = opt.t_end;

    auto capture = [&](const InitialDatumSpec& spec, double t_end, double cadence) {
        SolverConfig cfg;
        cfg.n = opt.n;
        cfg.gamma = gamma;
        cfg.t_end = t_end;
        std::vector<Checkpoint> cps;
        auto sink = [&](const SolverState& st) {
            cps.push_back({st.t, inverse_transform(st.theta_hat)});
        };
        run(build_datum(spec, g), cfg, sink, SinkCadence{0, cadence});
        return cps;
    };

    const auto run_a = capture(base, t_b * rate, t_b * rate / 4.0);
    const auto run_b = capture(scaled, t_b, t_b / 4.0);
    const double err = scaling_check(run_a, run_b, lambda, gamma);
    return {"scaling", err <= 1e-4, err, 1e-4,
            "max relative L2 mismatch across rescaled checkpoints"};
}

CheckResult check_dissipation_sign(const VerifyOptions& opt) {
    const Grid g = Grid::of(64);
    double worst_norm = 0.0; // max of the two violation ratios, each vs 1e-8
    std::ostringstream det;
    double worst_id = 0.0, worst_neg = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        for (double gamma : {0.6, 0.8, 1.0}) {
            const ScalarField f =
                random_field(g, dealias_limit(g) / 2, 3.0, opt.seed + 100 * trial, 1.0);
            const ScalarField d = dissipation_functional(f, gamma);
            const SpectralField F = forward_transform(f);
            const double want = 2.0 * std::pow(sobolev_norm(F, gamma / 2.0), 2.0);
            const double got = [&] {
                double s = 0.0;
                for (double v : d.values) s += v;
                return s / static_cast<double>(d.values.size());
            }();
            worst_id = std::max(worst_id, std::abs(got - want) / want);

            const double scale =
                f.max_abs() *
                inverse_transform(fractional_laplacian(F, gamma)).max_abs();
            double dmin = 0.0;
            for (double v : d.values) dmin = std::min(dmin, v);
            worst_neg = std::max(worst_neg, -dmin / scale);
        }
    }
    worst_norm = std::max(worst_id / 1e-8, worst_neg / 1e-8);
    det << "identity relerr " << fmt(worst_id) << ", worst negativity " << fmt(worst_neg)
        << " (both vs 1e-8)";
    return {"dgamma", worst_norm <= 1.0, worst_norm, 1.0, det.str()};
}

CheckResult check_holder_coherence(int n, std::uint64_t seed) {
    const Grid g = Grid::of(n);
    const ShiftSet shifts = ShiftSet::default_for(g);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        const ScalarField f = random_field(g, n / 4, 3.0, seed + trial, 1.0);
        const double linf = f.max_abs();
        for (double alpha : {0.4, 0.7}) {
            const double hs = holder_seminorm(f, alpha, shifts);
            HolderProbe probe{alpha, 0.0, shifts};
            const double vs = v_quotient(f, probe).sup;
            if (hs != vs) worst = std::max(worst, std::abs(hs - vs));
            for (double xi : {0.1, 1.0}) {
                probe.xi = xi;
                const double v = v_quotient(f, probe).sup;
                const double cap = 2.0 * linf / std::pow(xi, alpha);
                worst = std::max(worst, std::max(0.0, v - cap));
            }
        }
    }
    return {"holder", worst <= 0.0, worst, 0.0,
            "xi=0 coincidence must be exact; v_sup must respect 2|theta|_inf xi^-alpha"};
}

CheckResult check_xi_ode(int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const theory::UniversalConstants consts; // c0 = 1, hence c_star = 1/16
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const double xi0 = 0.2 + 2.8 * uniform01(rng);
        const double gamma = 0.55 + 0.40 * uniform01(rng);
        const double alpha = (1.0 - gamma) + (gamma - 1e-3) * uniform01(rng);
        const double t_star = alpha / (gamma * consts.c_star()) * std::pow(xi0, gamma);

        if (theory::xi_trajectory(t_star, xi0, gamma, alpha, consts) != 0.0)
            return {"xi_ode", false, 1.0, 0.0, "xi(T*) not exactly zero"};

        // RK4 on dxi/dt = -(c*/alpha) xi^{1-gamma} up to 0.9 T*
        const double t_max = 0.9 * t_star;
        const int steps = 1000;
        const double h = t_max / steps;
        double xi = xi0;
        auto f = [&](double x) { return -consts.c_star() / alpha * std::pow(x, 1.0 - gamma); };
        for (int i = 0; i < steps; ++i) {
            const double k1 = f(xi);
            const double k2 = f(xi + 0.5 * h * k1);
            const double k3 = f(xi + 0.5 * h * k2);
            const double k4 = f(xi + h * k3);
            xi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if ((i + 1) % 100 == 0) {
                const double closed =
                    theory::xi_trajectory(h * (i + 1), xi0, gamma, alpha, consts);
                worst = std::max(worst, std::abs(closed - xi) / std::max(1.0, xi0));
            }
        }
    }
    return {"xi_ode", worst <= 1e-8, worst, 1e-8,
            "closed form vs 1000-step RK4 on random (xi0, gamma, alpha)"};
}

CheckResult check_h2_riccati(int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const double y0 = 0.5 + 2.5 * uniform01(rng);
        const double gamma = 0.05 + 0.94 * uniform01(rng);
        const double a = 0.5 + 1.5 * uniform01(rng);
        const double p = 3.0 - gamma / 2.0;
        const double t_b = theory::h2_growth_bound(0.0, y0, gamma, a).blowup_time;

        const double t_max = 0.9 * t_b;
        const int steps = 4000;
        const double h = t_max / steps;
        double y = y0;
        auto f = [&](double v) { return a * std::pow(v, p); };
        for (int i = 0; i < steps; ++i) {
            const double k1 = f(y);
            const double k2 = f(y + 0.5 * h * k1);
            const double k3 = f(y + 0.5 * h * k2);
            const double k4 = f(y + h * k3);
            y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if ((i + 1) % 400 == 0) {
                const auto b = theory::h2_growth_bound(h * (i + 1), y0, gamma, a);
                worst = std::max(worst, std::abs(b.value - y) / y);
            }
        }
    }
    return {"h2_riccati", worst <= 1e-8, worst, 1e-8,
            "closed form vs RK4 for dy/dt = A y^{3-gamma/2} before 0.9 T_b"};
}

CheckResult check_criterion_gamma1() {
    theory::UniversalConstants c;
    c.C0 = 1.0;
    std::ostringstream det;
    const auto at09 = theory::criterion_check(0.9, 4.0, c);
    const auto at085 = theory::criterion_check(0.85, 4.0, c);
    const auto g4 = theory::gamma1(4.0, c);
    const auto g8 = theory::gamma1(8.0, c);
    const bool ok = at09.holds && !at085.holds && g4.gamma1 > 0.85 && g4.gamma1 < 0.9 &&
                    g8.gamma1 >= g4.gamma1;
    det << "gamma1(4) = " << g4.gamma1 << ", gamma1(8) = " << g8.gamma1
        << ", criterion(0.9) = " << at09.holds << ", criterion(0.85) = " << at085.holds;
    return {"criterion", ok, g4.gamma1, 0.9, det.str()};
}

std::vector<CheckResult> run_all(const VerifyOptions& opt) {
    return {check_operator_exactness(),
            check_linear_decay(),
            check_maximum_principle(opt),
            check_energy_balance(opt),
            check_scaling_symmetry(opt),
            check_dissipation_sign(opt),
            check_holder_coherence(),
            check_xi_ode(),
            check_h2_riccati(),
            check_criterion_gamma1()};
}

CheckResult run_one(const std::string& name, const VerifyOptions& opt) {
    if (name == "operators") return check_operator_exactness();
    if (name == "linear_decay") return check_linear_decay();
    if (name == "max_principle") return check_maximum_principle(opt);
    if (name == "energy_balance") return check_energy_balance(opt);
    if (name == "scaling") return check_scaling_symmetry(opt);
    if (name == "dgamma") return check_dissipation_sign(opt);
    if (name == "holder") return check_holder_coherence();
    if (name == "xi_ode") return check_xi_ode();
    if (name == "h2_riccati") return check_h2_riccati();
    if (name == "criterion") return check_criterion_gamma1();
    throw std::invalid_argument("unknown check '" + name + "'");
}

std::vector<std::string> check_names() {
    return {"operators", "linear_decay", "max_principle", "energy_balance", "scaling",
            "dgamma",    "holder",       "xi_ode",        "h2_riccati",     "criterion"};
}

} // namespace sqg::verify

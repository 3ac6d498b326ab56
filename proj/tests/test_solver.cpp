#include <doctest.h>

#include "oracles.hpp"
#include "sqg/fft.hpp"
#include "sqg/operators.hpp"
#include "sqg/solver.hpp"

#include <cmath>
#include <numbers>

using namespace sqg;
namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

SolverConfig base_config(int n, double gamma, double t_end) {
    SolverConfig cfg;
    cfg.n = n;
    cfg.gamma = gamma;
    cfg.t_end = t_end;
    return cfg;
}

ScalarField from_modes(const Grid& g, std::vector<DatumMode> modes) {
    InitialDatumSpec spec;
    spec.modes = std::move(modes);
    return build_datum(spec, g);
}

double rel_spectral_diff(const SpectralField& a, const SpectralField& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
        num += std::norm(a.coeffs[i] - b.coeffs[i]);
        den += std::norm(b.coeffs[i]);
    }
    return std::sqrt(num / den);
}

} // namespace

TEST_SUITE_BEGIN("solver");

TEST_CASE("config validation") {
    SolverConfig cfg = base_config(64, 0.8, 1.0);
    CHECK_NOTHROW(cfg.validate());
    cfg.gamma = 1.5;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("gamma out of"),
                         std::invalid_argument);
    cfg = base_config(64, 0.8, 1.0);
    cfg.cfl_number = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = base_config(64, 0.02, 1.0); // below gamma0
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("nonlinear term") {
    const Grid g = Grid::of(32);
    SUBCASE("zero input") {
        CHECK(nonlinear_term(SpectralField(g)).max_abs() == 0.0);
    }
    SUBCASE("single mode: u is orthogonal to grad theta") {
        const ScalarField f = from_modes(g, {{{1, 0}, 1.0, -std::numbers::pi / 2}});
        CHECK(nonlinear_term(forward_transform(f)).max_abs() <= 1e-12);
    }
    SUBCASE("sin(2 pi x1) + cos(2 pi x2): the four-term expansion cancels") {
        const ScalarField f = from_modes(
            g, {{{1, 0}, 1.0, -std::numbers::pi / 2}, {{0, 1}, 1.0, 0.0}});
        CHECK(nonlinear_term(forward_transform(f)).max_abs() <= 1e-12);
    }
    SUBCASE("matches the brute-force spectral convolution") {
        const Grid gs = Grid::of(16);
        const ScalarField f = oracle::random_field(gs, 4, 1.2, 303);
        const SpectralField T = forward_transform(f);
        const SpectralField got = nonlinear_term(T);
        const SpectralField want = dealias([&] {
            SpectralField conv = oracle::advection_convolution(T);
            for (auto& c : conv.coeffs) c = -c;
            return conv;
        }());
        double diff = 0.0;
        for (std::size_t i = 0; i < got.coeffs.size(); ++i)
            diff = std::max(diff, std::abs(got.coeffs[i] - want.coeffs[i]));
        CHECK(diff <= 1e-12 * want.max_abs());
    }
    SUBCASE("output mean is pinned to zero") {
        const ScalarField f = oracle::random_field(g, 8, 1.5, 304);
        CHECK(nonlinear_term(forward_transform(f)).coeffs[0] == std::complex<double>(0.0, 0.0));
    }
}

TEST_CASE("step") {
    const Grid g = Grid::of(32);
    SUBCASE("pure dissipation: one mode, gamma = 1, dt = 0.1") {
        SolverConfig cfg = base_config(32, 1.0, 1.0);
        cfg.linear_only = true;
        const ScalarField f = from_modes(g, {{{1, 0}, 1.0, 0.0}});
        SolverState s = make_state(f, cfg);
        const std::complex<double> before = s.theta_hat.at_wave(1, 0);
        s = step(s, 0.1);
        const double factor = std::exp(-0.2 * std::numbers::pi);
        CHECK(std::abs(s.theta_hat.at_wave(1, 0) - factor * before) <= 1e-15);
        CHECK(factor == doctest::Approx(0.533488).epsilon(1e-6));
    }
    SUBCASE("dt = 0 leaves the state untouched") {
        const ScalarField f = oracle::random_field(g, 8, 2.0, 1);
        const SolverState s = make_state(f, base_config(32, 0.8, 1.0));
        const SolverState s2 = step(s, 0.0);
        CHECK(s2.t == s.t);
        CHECK(s2.step_count == s.step_count);
        CHECK(s2.theta_hat.coeffs == s.theta_hat.coeffs);
    }
    SUBCASE("negative dt is rejected") {
        const SolverState s = make_state(ScalarField(g), base_config(32, 0.8, 1.0));
        CHECK_THROWS_AS(step(s, -0.1), std::invalid_argument);
    }
    SUBCASE("Richardson: one step vs two half-steps, measured order >= 3.8") {
        const ScalarField f = oracle::random_field(g, 6, 2.5, 42, 1.0);
        const SolverState s0 = make_state(f, base_config(32, 0.8, 1.0));
        const double dt = 0.02;
        auto advance = [&](int pieces) {
            SolverState s = s0;
            for (int i = 0; i < pieces; ++i) s = step(s, dt / pieces);
            return s.theta_hat;
        };
        const SpectralField u1 = advance(1), u2 = advance(2), u4 = advance(4);
        double d12 = 0.0, d24 = 0.0;
        for (std::size_t i = 0; i < u1.coeffs.size(); ++i) {
            d12 = std::max(d12, std::abs(u1.coeffs[i] - u2.coeffs[i]));
            d24 = std::max(d24, std::abs(u2.coeffs[i] - u4.coeffs[i]));
        }
        const double order = std::log2(d12 / d24);
        CHECK(order >= 3.8);
    }
}

TEST_CASE("adaptive_dt") {
    SUBCASE("zero velocity returns dt_max") {
        SolverConfig cfg = base_config(32, 0.8, 1.0);
        cfg.dt_max = 0.037;
        const SolverState s = make_state(ScalarField(Grid::of(32)), cfg);
        CHECK(adaptive_dt(s, cfg) == 0.037);
    }
    SUBCASE("formula evaluation at unit peak speed") {
        // theta = sin(2 pi x1) gives u = (0, cos(2 pi x1)), peak speed exactly 1
        SolverConfig cfg = base_config(64, 0.8, 1.0);
        cfg.dt_max = 1.0;
        cfg.cfl_number = 0.5;
        const Grid g = Grid::of(64);
        const SolverState s =
            make_state(from_modes(g, {{{1, 0}, 1.0, -std::numbers::pi / 2}}), cfg);
        CHECK(adaptive_dt(s, cfg) == doctest::Approx(0.5 / 64.0).epsilon(1e-12));
    }
    SUBCASE("doubling the resolution halves the velocity-limited dt") {
        SolverConfig c64 = base_config(64, 0.8, 1.0);
        c64.dt_max = 1.0;
        SolverConfig c128 = base_config(128, 0.8, 1.0);
        c128.dt_max = 1.0;
        const SolverState a = make_state(
            from_modes(Grid::of(64), {{{1, 0}, 1.0, -std::numbers::pi / 2}}), c64);
        const SolverState b = make_state(
            from_modes(Grid::of(128), {{{1, 0}, 1.0, -std::numbers::pi / 2}}), c128);
        CHECK(adaptive_dt(a, c64) == doctest::Approx(2.0 * adaptive_dt(b, c128)).epsilon(1e-12));
    }
    SUBCASE("clips to the time budget") {
        SolverConfig cfg = base_config(32, 0.8, 1.0);
        const SolverState s = make_state(ScalarField(Grid::of(32)), cfg);
        CHECK(adaptive_dt(s, cfg, 1e-4) == 1e-4);
    }
}

TEST_CASE("run") {
    SUBCASE("zero datum completes with a zero final state") {
        const auto out = run(ScalarField(Grid::of(32)), base_config(32, 0.8, 0.3));
        CHECK(out.reason == Termination::completed);
        CHECK(out.final_state.theta_hat.max_abs() == 0.0);
        CHECK(out.final_state.t == doctest::Approx(0.3));
    }
    SUBCASE("single mode with the nonlinearity disabled decays exactly") {
        SolverConfig cfg = base_config(32, 0.5, 1.0);
        cfg.linear_only = true;
        cfg.dt_max = 0.05;
        const Grid g = Grid::of(32);
        const ScalarField f = from_modes(g, {{{1, 0}, 1.0, 0.2}});
        const SpectralField F0 = forward_transform(f);
        const auto out = run(f, cfg);
        const double factor = std::exp(-std::pow(two_pi, 0.5) * out.final_state.t);
        CHECK(std::abs(out.final_state.theta_hat.at_wave(1, 0) - factor * F0.at_wave(1, 0)) <=
              1e-10 * std::abs(F0.at_wave(1, 0)));
    }
    SUBCASE("history is per step with nondecreasing time") {
        const auto out = run(oracle::random_field(Grid::of(32), 5, 3.0, 77, 0.5),
                             base_config(32, 0.8, 0.1));
        CHECK(out.history.size() == out.final_state.step_count);
        for (std::size_t i = 1; i < out.history.size(); ++i)
            CHECK(out.history[i].t > out.history[i - 1].t);
    }
    SUBCASE("refining the grid does not move the solution (resolution oracle)") {
        InitialDatumSpec spec;
        spec.kind = InitialDatumSpec::Kind::random_spectrum;
        spec.cutoff = 6;
        spec.slope = 4.0;
        spec.seed = 500;
        spec.scale = 0.3;
        SolverConfig c64 = base_config(64, 0.8, 0.5);
        SolverConfig c128 = base_config(128, 0.8, 0.5);
        const auto out64 = run(build_datum(spec, Grid::of(64)), c64);
        const auto out128 = run(build_datum(spec, Grid::of(128)), c128);
        // compare over the coarse band
        SpectralField fine_on_coarse(Grid::of(64));
        for (int i = 0; i < 64; ++i) {
            const int k1 = fine_on_coarse.grid.wavenumber(i);
            for (int j = 0; j < 64; ++j) {
                const int k2 = fine_on_coarse.grid.wavenumber(j);
                if (k1 == 32 || k2 == 32) continue;
                fine_on_coarse.at(i, j) = out128.final_state.theta_hat.at_wave(k1, k2);
            }
        }
        CHECK(rel_spectral_diff(out64.final_state.theta_hat, fine_on_coarse) <= 1e-6);
    }
    SUBCASE("L2 balance and max principle on a short nonlinear run") {
        SolverConfig cfg = base_config(64, 0.8, 0.25);
        const ScalarField f = oracle::random_field(Grid::of(64), 8, 4.0, 99, 1.0);
        double l2_0_sq = -1.0;
        double worst_balance = 0.0;
        auto sink = [&](const SolverState& st) {
            const double l2sq = st.theta_hat.l2_norm_sq();
            if (l2_0_sq < 0.0) l2_0_sq = l2sq;
            worst_balance = std::max(
                worst_balance,
                std::abs(l2sq - l2_0_sq + 2.0 * st.dissipation_integral) / l2_0_sq);
        };
        const auto out = run(f, cfg, sink, SinkCadence{3, 0.0});
        CHECK(out.reason == Termination::completed);
        CHECK(worst_balance <= 1e-6);
        double running = out.linf0;
        for (const auto& s : out.history) {
            CHECK(s.linf <= running + 1e-6 * out.linf0);
            running = std::min(running, s.linf);
        }
    }
    SUBCASE("time-based cadence lands on the checkpoints exactly") {
        SolverConfig cfg = base_config(32, 0.8, 0.2);
        std::vector<double> times;
        auto sink = [&](const SolverState& st) { times.push_back(st.t); };
        run(oracle::random_field(Grid::of(32), 5, 3.0, 3, 0.5), cfg, sink,
            SinkCadence{0, 0.05});
        REQUIRE(times.size() == 5); // t = 0 and four checkpoints
        for (int k = 0; k < 5; ++k) CHECK(times[k] == doctest::Approx(0.05 * k).epsilon(1e-12));
    }
    SUBCASE("hard resolution gate") {
        const Grid g = Grid::of(32);
        const ScalarField bad = from_modes(g, {{{14, 0}, 1.0, 0.0}});
        CHECK_THROWS_WITH_AS(run(bad, base_config(32, 0.8, 0.1)),
                             doctest::Contains("unresolved datum"), std::invalid_argument);
    }
    SUBCASE("marginal resolution only warns") {
        const Grid g = Grid::of(32);
        const ScalarField f =
            from_modes(g, {{{1, 0}, 1.0, 0.0}, {{14, 0}, 1e-3, 0.0}}); // ~1e-6 energy fraction
        const auto out = run(f, base_config(32, 0.8, 0.05));
        CHECK(out.warnings.size() == 1);
    }
    SUBCASE("flipped dissipation sign breaks the maximum principle") {
        SolverConfig cfg = base_config(32, 0.8, 0.05);
        cfg.flip_dissipation_sign = true;
        cfg.blowup_threshold = 1e6;
        const auto out = run(oracle::random_field(Grid::of(32), 5, 3.0, 7, 1.0), cfg);
        double worst = 0.0;
        double running = out.linf0;
        for (const auto& s : out.history) {
            worst = std::max(worst, (s.linf - running) / out.linf0);
            running = std::min(running, s.linf);
        }
        CHECK(worst > 1e-6);
    }
    SUBCASE("blowup threshold aborts the run") {
        SolverConfig cfg = base_config(32, 0.8, 1.0);
        cfg.flip_dissipation_sign = true; // guaranteed growth
        cfg.blowup_threshold = 1.5;
        const auto out = run(oracle::random_field(Grid::of(32), 5, 3.0, 7, 1.0), cfg);
        CHECK(out.reason == Termination::blowup_threshold);
        CHECK(out.final_state.t < 1.0);
        CHECK_FALSE(out.history.empty());
    }
}

TEST_CASE("scaling symmetry end to end") {
    const int n = 64;
    const double gamma = 0.8;
    const int lambda = 2;
    const double t_b = 0.25;
    const double rate = std::pow(static_cast<double>(lambda), gamma);
    const double amp = 0.5;
    const double amp_l = amp * std::pow(static_cast<double>(lambda), gamma - 1.0);

    auto capture = [&](std::vector<DatumMode> modes, double t_end, double cadence) {
        SolverConfig cfg = base_config(n, gamma, t_end);
        std::vector<Checkpoint> cps;
        auto sink = [&](const SolverState& st) {
            cps.push_back({st.t, inverse_transform(st.theta_hat)});
        };
        run(from_modes(Grid::of(n), std::move(modes)), cfg, sink, SinkCadence{0, cadence});
        return cps;
    };
    const auto run_a = capture({{{1, 0}, amp, -std::numbers::pi / 2}, {{1, 1}, amp, 0.0}},
                               t_b * rate, t_b * rate / 4.0);
    const auto run_b = capture({{{2, 0}, amp_l, -std::numbers::pi / 2}, {{2, 2}, amp_l, 0.0}},
                               t_b, t_b / 4.0);
    CHECK(scaling_check(run_a, run_b, lambda, gamma) <= 1e-4);
}

TEST_SUITE_END();

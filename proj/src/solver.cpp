#include "sqg/solver.hpp"

#include "sqg/fft.hpp"
#include "sqg/operators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace sqg {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// (2 pi |k|)^gamma per mode, cached across steps
const std::vector<double>& dissipation_symbol(const Grid& g, double gamma) {
    static std::mutex mu;
    static std::map<std::pair<int, double>, std::vector<double>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(g.n, gamma);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<double> m(g.size(), 0.0);
    for (int i = 0; i < g.n; ++i) {
        const double k1 = g.wavenumber(i);
        for (int j = 0; j < g.n; ++j) {
            const double k2 = g.wavenumber(j);
            if (k1 == 0 && k2 == 0) continue;
            m[static_cast<std::size_t>(i) * g.n + j] = std::pow(two_pi * std::hypot(k1, k2), gamma);
        }
    }
    return cache.emplace(key, std::move(m)).first->second;
}

// |Lambda^{gamma/2} theta|_{L2}^2 = sum_k m(k) |c_k|^2
double dissipation_rate(const SpectralField& F, const std::vector<double>& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < F.coeffs.size(); ++i) s += m[i] * std::norm(F.coeffs[i]);
    return s;
}

void scale_add(SpectralField& out, const std::vector<double>& e, const SpectralField& base,
               double w, const SpectralField& add) {
    for (std::size_t i = 0; i < out.coeffs.size(); ++i)
        out.coeffs[i] = e[i] * (base.coeffs[i] + w * add.coeffs[i]);
}

} // namespace

const char* to_string(Termination t) {
    switch (t) {
        case Termination::completed: return "completed";
        case Termination::blowup_threshold: return "blowup_threshold";
        case Termination::nan: return "nan";
    }
    return "unknown";
}

void SolverConfig::validate() const {
    Grid::of(n);
    if (!(gamma0 > 0.0 && gamma0 < 1.0))
        throw std::invalid_argument("solver.gamma0 must lie in (0,1)");
    if (!(gamma >= gamma0 && gamma <= 1.0))
        throw std::invalid_argument("solver.gamma out of [gamma0, 1]");
    if (!(cfl_number > 0.0 && cfl_number <= 1.0))
        throw std::invalid_argument("solver.cfl_number must lie in (0,1]");
    if (!(dt_max > 0.0)) throw std::invalid_argument("solver.dt_max must be positive");
    if (!(t_end > 0.0)) throw std::invalid_argument("solver.t_end must be positive");
    if (!(blowup_threshold > 0.0))
        throw std::invalid_argument("solver.blowup_threshold must be positive");
}

SpectralField nonlinear_term(const SpectralField& theta_hat) {
    const Grid& g = theta_hat.grid;
    const VectorSpectralField u = riesz_perp_velocity(theta_hat);
    const VectorSpectralField gr = gradient(theta_hat);

    const ScalarField u1 = inverse_transform(u.u1);
    const ScalarField u2 = inverse_transform(u.u2);
    const ScalarField g1 = inverse_transform(gr.u1);
    const ScalarField g2 = inverse_transform(gr.u2);

    ScalarField prod(g);
    for (std::size_t i = 0; i < prod.values.size(); ++i)
        prod.values[i] = u1.values[i] * g1.values[i] + u2.values[i] * g2.values[i];

    SpectralField out = dealias(forward_transform(prod));
    for (auto& c : out.coeffs) c = -c;
    out.coeffs[0] = 0.0;
    out.require_finite("nonlinear_term");
    return out;
}

double max_speed(const SpectralField& theta_hat) {
    const VectorSpectralField u = riesz_perp_velocity(theta_hat);
    const ScalarField u1 = inverse_transform(u.u1);
    const ScalarField u2 = inverse_transform(u.u2);
    double m = 0.0;
    for (std::size_t i = 0; i < u1.values.size(); ++i)
        m = std::max(m, std::hypot(u1.values[i], u2.values[i]));
    return m;
}

SolverState step(const SolverState& state, double dt) {
    if (dt < 0.0) throw std::invalid_argument("step: dt must be >= 0");
    if (dt == 0.0) return state;

    const Grid& g = state.theta_hat.grid;
    const std::size_t n2 = g.size();
    const std::vector<double>& m = dissipation_symbol(g, state.gamma);
    const double sign = state.flip_dissipation_sign ? 1.0 : -1.0;

    SolverState next = state;
    next.t = state.t + dt;
    next.step_count = state.step_count + 1;
    next.dt_last = dt;

    if (state.linear_only) {
        for (std::size_t i = 0; i < n2; ++i) {
            next.theta_hat.coeffs[i] = std::exp(sign * m[i] * dt) * state.theta_hat.coeffs[i];
            // exact per-mode integral of the dissipation rate over the step
            next.dissipation_integral +=
                std::norm(state.theta_hat.coeffs[i]) * std::expm1(2.0 * sign * m[i] * dt) /
                (2.0 * sign);
        }
        next.theta_hat.require_finite("step");
        return next;
    }

    std::vector<double> ehalf(n2), efull(n2);
    for (std::size_t i = 0; i < n2; ++i) {
        ehalf[i] = std::exp(sign * m[i] * dt * 0.5);
        efull[i] = ehalf[i] * ehalf[i];
    }

    const SpectralField& u0 = state.theta_hat;
    const SpectralField n1 = nonlinear_term(u0);

    SpectralField a(g);
    scale_add(a, ehalf, u0, 0.5 * dt, n1); // E (u0 + dt/2 N1)
    const SpectralField n2t = nonlinear_term(a);

    SpectralField b(g);
    for (std::size_t i = 0; i < n2; ++i)
        b.coeffs[i] = ehalf[i] * u0.coeffs[i] + 0.5 * dt * n2t.coeffs[i];
    const SpectralField n3 = nonlinear_term(b);

    SpectralField c(g);
    for (std::size_t i = 0; i < n2; ++i)
        c.coeffs[i] = efull[i] * u0.coeffs[i] + dt * ehalf[i] * n3.coeffs[i];
    const SpectralField n4 = nonlinear_term(c);

    for (std::size_t i = 0; i < n2; ++i)
        next.theta_hat.coeffs[i] =
            efull[i] * u0.coeffs[i] +
            dt / 6.0 *
                (efull[i] * n1.coeffs[i] + 2.0 * ehalf[i] * (n2t.coeffs[i] + n3.coeffs[i]) +
                 n4.coeffs[i]);
    next.theta_hat.coeffs[0] = 0.0;
    next.theta_hat.require_finite("step");

    // same stage weights for the dissipation time integral
    next.dissipation_integral +=
        dt / 6.0 *
        (dissipation_rate(u0, m) + 2.0 * dissipation_rate(a, m) + 2.0 * dissipation_rate(b, m) +
         dissipation_rate(c, m));
    return next;
}

double adaptive_dt(const SolverState& state, const SolverConfig& config, double time_budget) {
    const double floor_speed = 1e-8;
    const double umax = std::max(max_speed(state.theta_hat), floor_speed);
    double dt = std::min(config.dt_max, config.cfl_number * state.theta_hat.grid.spacing / umax);
    dt = std::min(dt, time_budget);
    return dt;
}

SolverState make_state(const ScalarField& datum, const SolverConfig& config) {
    config.validate();
    if (datum.grid.n != config.n)
        throw std::invalid_argument("datum grid does not match solver grid");
    datum.require_finite("run datum");
    datum.require_zero_mean("run datum");

    SpectralField F = forward_transform(datum);
    if (!config.linear_only) F = dealias(F); // keep the state inside the alias-free band

    SolverState state;
    state.theta_hat = std::move(F);
    state.gamma = config.gamma;
    state.linear_only = config.linear_only;
    state.flip_dissipation_sign = config.flip_dissipation_sign;
    return state;
}

RunOutcome run(const ScalarField& datum, const SolverConfig& config, const RunSink& sink,
               const SinkCadence& cadence) {
    RunOutcome out;

    // resolution gate on the raw datum spectrum
    {
        const SpectralField F0 = forward_transform(datum);
        const int quarter = config.n / 4;
        double high = 0.0, total = 0.0;
        for (int i = 0; i < config.n; ++i) {
            const int k1 = std::abs(F0.grid.wavenumber(i));
            for (int j = 0; j < config.n; ++j) {
                const int k2 = std::abs(F0.grid.wavenumber(j));
                const double e = std::norm(F0.at(i, j));
                total += e;
                if (std::max(k1, k2) > quarter) high += e;
            }
        }
        out.high_wavenumber_fraction = total > 0.0 ? high / total : 0.0;
        if (out.high_wavenumber_fraction > 1e-2)
            throw std::invalid_argument(
                "unresolved datum: " + std::to_string(out.high_wavenumber_fraction) +
                " of the energy sits above wavenumber n/4");
        if (out.high_wavenumber_fraction > 1e-8)
            out.warnings.push_back("datum marginally resolved: high-wavenumber fraction " +
                                   std::to_string(out.high_wavenumber_fraction));
    }

    SolverState state = make_state(datum, config);
    out.l2_0 = std::sqrt(state.theta_hat.l2_norm_sq());
    out.linf0 = inverse_transform(state.theta_hat).max_abs();

    if (sink) sink(state);

    const bool by_time = cadence.every_dt > 0.0;
    double next_cp = by_time ? cadence.every_dt : 0.0;
    const double t_tol = 1e-12 * std::max(1.0, config.t_end);
    const std::uint64_t max_steps = 50'000'000;

    out.reason = Termination::completed;
    while (state.t < config.t_end - t_tol) {
        const double stop = by_time ? std::min(config.t_end, next_cp) : config.t_end;
        const double dt = adaptive_dt(state, config, stop - state.t);
        bool sank = false;
        try {
            state = step(state, dt);
        } catch (const NumericsError&) {
            out.reason = Termination::nan;
            break;
        }

        const double linf = inverse_transform(state.theta_hat).max_abs();
        const double l2 = std::sqrt(state.theta_hat.l2_norm_sq());
        out.history.push_back({state.t, linf, l2});

        if (by_time && state.t >= next_cp - t_tol) {
            if (sink) sink(state);
            sank = true;
            next_cp += cadence.every_dt;
        } else if (!by_time && cadence.every_steps > 0 &&
                   state.step_count % cadence.every_steps == 0) {
            if (sink) sink(state);
            sank = true;
        }

        if (!std::isfinite(linf)) {
            out.reason = Termination::nan;
            break;
        }
        if (linf > config.blowup_threshold * out.linf0 && out.linf0 > 0.0) {
            out.reason = Termination::blowup_threshold;
            if (sink && !sank) sink(state);
            break;
        }
        if (state.step_count >= max_steps)
            throw NumericsError("run: step limit exceeded (dt collapsed)");
        if (state.t >= config.t_end - t_tol) {
            if (sink && !sank) sink(state);
            break;
        }
    }
    out.final_state = std::move(state);
    return out;
}

} // namespace sqg

// solver.hpp
// Time integration of the dissipative SQG equation with the stiff fractional
// dissipation handled exactly per mode (integrating-factor RK4) and the
// advective nonlinearity formed pseudo-spectrally with 2/3 dealiasing.

#pragma once

#include "sqg/field.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace sqg {

struct SolverConfig {
    int n = 128;
    double gamma = 0.8;
    double gamma0 = 0.05;          // admissible lower end for gamma
    double cfl_number = 0.5;       // in (0,1]
    double dt_max = 0.01;
    double t_end = 1.0;
    double blowup_threshold = 10.0; // abort when linf exceeds this multiple of linf(0)
    bool linear_only = false;       // test mode: drop the nonlinearity
    bool flip_dissipation_sign = false; // fault-injection hook for the verify suite

    void validate() const;
};

struct SolverState {
    SpectralField theta_hat;
    double t = 0.0;
    double gamma = 0.8;
    std::uint64_t step_count = 0;
    double dt_last = 0.0;
    // int_0^t |Lambda^{gamma/2} theta|_{L2}^2 ds, accumulated with the same
    // stage quadrature as the stepper (exactly, in linear-only mode)
    double dissipation_integral = 0.0;
    bool linear_only = false;
    bool flip_dissipation_sign = false;
};

enum class Termination { completed, blowup_threshold, nan };

const char* to_string(Termination t);

struct NormSample {
    double t = 0.0;
    double linf = 0.0;
    double l2 = 0.0;
};

struct RunOutcome {
    SolverState final_state;
    Termination reason = Termination::completed;
    std::vector<NormSample> history; // one sample per accepted step
    double linf0 = 0.0;
    double l2_0 = 0.0;
    double high_wavenumber_fraction = 0.0; // datum energy above |k| = n/4
    std::vector<std::string> warnings;
};

// Output cadence: positive every_steps -> sink every k accepted steps;
// positive every_dt -> sink at multiples of every_dt (steps land exactly on
// those times).  Exactly one should be positive.
struct SinkCadence {
    std::uint64_t every_steps = 1;
    double every_dt = 0.0;
};

using RunSink = std::function<void(const SolverState&)>;

// Spectral coefficients of -u . grad(theta), dealiased, mean pinned to zero.
SpectralField nonlinear_term(const SpectralField& theta_hat);

// Advance one step of size dt >= 0.  Dissipation enters through the exact
// per-mode factor exp(-(2 pi |k|)^gamma dt); with the nonlinearity off the
// step is exact per mode.  Throws NumericsError if non-finite values appear.
SolverState step(const SolverState& state, double dt);

// min(dt_max, cfl * spacing / max(|u|_inf, 1e-8)), clipped to time_budget.
double adaptive_dt(const SolverState& state, const SolverConfig& config,
                   double time_budget = std::numeric_limits<double>::infinity());

// Integrate from the datum to t_end (or abort), invoking the sink at t = 0,
// at each cadence point, and at termination.
RunOutcome run(const ScalarField& datum, const SolverConfig& config, const RunSink& sink = {},
               const SinkCadence& cadence = {});

// Max pointwise speed of the Riesz velocity of the state.
double max_speed(const SpectralField& theta_hat);

SolverState make_state(const ScalarField& datum, const SolverConfig& config);

} // namespace sqg

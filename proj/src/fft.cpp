#include "sqg/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace sqg {
namespace {

// One forward and one backward plan per grid size, created against per-thread
// fftw_malloc'd scratch (so alignment at execute time matches plan time).
// FFTW's planner is not thread-safe; plan creation is serialized.
struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

struct Scratch {
    std::size_t n2 = 0;
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;

    void ensure(std::size_t want) {
        if (n2 >= want) return;
        if (in) fftw_free(in);
        if (out) fftw_free(out);
        in = fftw_alloc_complex(want);
        out = fftw_alloc_complex(want);
        n2 = want;
    }
    ~Scratch() {
        if (in) fftw_free(in);
        if (out) fftw_free(out);
    }
};

std::mutex plan_mutex;
std::map<int, PlanPair> plan_cache;

PlanPair plans_for(int n, fftw_complex* in, fftw_complex* out) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto it = plan_cache.find(n);
    if (it != plan_cache.end()) return it->second;
    PlanPair p;
    p.fwd = fftw_plan_dft_2d(n, n, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    p.bwd = fftw_plan_dft_2d(n, n, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
    plan_cache.emplace(n, p);
    return p;
}

Scratch& scratch() {
    thread_local Scratch s;
    return s;
}

} // namespace

SpectralField forward_transform(const ScalarField& f) {
    f.require_finite("forward_transform");
    const int n = f.grid.n;
    const std::size_t n2 = f.grid.size();

    Scratch& s = scratch();
    s.ensure(n2);
    for (std::size_t i = 0; i < n2; ++i) {
        s.in[i][0] = f.values[i];
        s.in[i][1] = 0.0;
    }
    PlanPair p = plans_for(n, s.in, s.out);
    fftw_execute_dft(p.fwd, s.in, s.out);

    SpectralField F(f.grid);
    const double inv = 1.0 / static_cast<double>(n2);
    for (std::size_t i = 0; i < n2; ++i)
        F.coeffs[i] = std::complex<double>(s.out[i][0] * inv, s.out[i][1] * inv);
    F.coeffs[0] = 0.0; // pin the mean
    return F;
}

ScalarField inverse_transform(const SpectralField& F) {
    F.require_finite("inverse_transform");
    const double cmax = F.max_abs();
    const double defect = F.hermitian_defect();
    if (defect > 1e-10 * cmax && cmax > 0.0)
        throw std::invalid_argument("inverse_transform: Hermitian symmetry violated (defect " +
                                    std::to_string(defect / cmax) + " relative)");

    const int n = F.grid.n;
    const std::size_t n2 = F.grid.size();
    Scratch& s = scratch();
    s.ensure(n2);
    for (std::size_t i = 0; i < n2; ++i) {
        s.in[i][0] = F.coeffs[i].real();
        s.in[i][1] = F.coeffs[i].imag();
    }
    PlanPair p = plans_for(n, s.in, s.out);
    fftw_execute_dft(p.bwd, s.in, s.out);

    ScalarField f(F.grid);
    double max_mag = 0.0, max_imag = 0.0;
    for (std::size_t i = 0; i < n2; ++i) {
        f.values[i] = s.out[i][0];
        max_mag = std::max(max_mag, std::hypot(s.out[i][0], s.out[i][1]));
        max_imag = std::max(max_imag, std::abs(s.out[i][1]));
    }
    if (max_imag > 1e-12 * max_mag && max_mag > 0.0)
        throw NumericsError("inverse_transform: imaginary residue " +
                            std::to_string(max_imag / max_mag) + " relative");
    return f;
}

} // namespace sqg

#include "sqg/datum.hpp"

#include "sqg/fft.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace sqg {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// uniform in [0,1) from the raw generator output; keeps phase draws
// implementation-independent
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

void InitialDatumSpec::validate() const {
    if (kind == Kind::modes) {
        if (modes.empty()) throw std::invalid_argument("datum: modes list is empty");
        for (const auto& m : modes)
            if (m.k[0] == 0 && m.k[1] == 0)
                throw std::invalid_argument("datum: mode (0,0) would break the zero mean");
    } else {
        if (!(slope > 0.0)) throw std::invalid_argument("datum: slope must be positive");
        if (cutoff < 1) throw std::invalid_argument("datum: cutoff must be >= 1");
    }
    if (!(scale >= 0.0) || !std::isfinite(scale))
        throw std::invalid_argument("datum: scale must be finite and >= 0");
}

SpectralField build_datum_spectral(const InitialDatumSpec& spec, const Grid& grid) {
    spec.validate();
    SpectralField F(grid);
    const int half = grid.n / 2;

    if (spec.kind == InitialDatumSpec::Kind::modes) {
        for (const auto& m : spec.modes) {
            if (std::abs(m.k[0]) >= half || std::abs(m.k[1]) >= half)
                throw std::invalid_argument("datum: mode beyond representable wavenumbers");
            const std::complex<double> c =
                0.5 * spec.scale * m.amplitude *
                std::complex<double>(std::cos(m.phase), std::sin(m.phase));
            F.at_wave(m.k[0], m.k[1]) += c;
            F.at_wave(-m.k[0], -m.k[1]) += std::conj(c);
        }
        return F;
    }

    std::mt19937_64 rng(spec.seed);
    const int kmax = std::min(spec.cutoff, half - 1);
    // half-plane sweep in a fixed order; the mirror mode carries the conjugate
    for (int k1 = 0; k1 <= kmax; ++k1) {
        for (int k2 = -kmax; k2 <= kmax; ++k2) {
            if (k1 == 0 && k2 <= 0) continue;
            const double mag =
                spec.scale * std::pow(std::hypot(static_cast<double>(k1), k2), -spec.slope);
            const double phase = two_pi * uniform01(rng);
            const std::complex<double> c(mag * std::cos(phase), mag * std::sin(phase));
            F.at_wave(k1, k2) = c;
            F.at_wave(-k1, -k2) = std::conj(c);
        }
    }
    return F;
}

ScalarField build_datum(const InitialDatumSpec& spec, const Grid& grid) {
    return inverse_transform(build_datum_spectral(spec, grid));
}

} // namespace sqg

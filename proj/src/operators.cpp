#include "sqg/operators.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace sqg {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void require_sigma(double sigma) {
    if (!(sigma > 0.0 && sigma <= 2.0))
        throw std::invalid_argument("fractional Laplacian exponent must lie in (0,2], got " +
                                    std::to_string(sigma));
}

// Clear the low `bits` mantissa bits so later multiplication by integers up to
// 2^bits is exact.
double truncate_mantissa(double x, int bits) {
    const std::uint64_t mask = ~((std::uint64_t{1} << bits) - 1);
    return std::bit_cast<double>(std::bit_cast<std::uint64_t>(x) & mask);
}

} // namespace

SpectralField fractional_laplacian(const SpectralField& F, double sigma) {
    require_sigma(sigma);
    const Grid& g = F.grid;
    SpectralField out(g);
    for (int i = 0; i < g.n; ++i) {
        const double k1 = g.wavenumber(i);
        for (int j = 0; j < g.n; ++j) {
            const double k2 = g.wavenumber(j);
            if (k1 == 0 && k2 == 0) continue;
            const double mult = std::pow(two_pi * std::hypot(k1, k2), sigma);
            out.at(i, j) = mult * F.at(i, j);
        }
    }
    return out;
}

SpectralField inverse_fractional_laplacian(const SpectralField& F, double sigma) {
    require_sigma(sigma);
    const Grid& g = F.grid;
    SpectralField out(g);
    for (int i = 0; i < g.n; ++i) {
        const double k1 = g.wavenumber(i);
        for (int j = 0; j < g.n; ++j) {
            const double k2 = g.wavenumber(j);
            if (k1 == 0 && k2 == 0) continue;
            const double mult = std::pow(two_pi * std::hypot(k1, k2), -sigma);
            out.at(i, j) = mult * F.at(i, j);
        }
    }
    return out;
}

VectorSpectralField gradient(const SpectralField& F) {
    const Grid& g = F.grid;
    const int nyq = g.n / 2;
    VectorSpectralField out{SpectralField(g), SpectralField(g)};
    const std::complex<double> I(0.0, 1.0);
    for (int i = 0; i < g.n; ++i) {
        const int k1 = g.wavenumber(i);
        for (int j = 0; j < g.n; ++j) {
            const int k2 = g.wavenumber(j);
            const std::complex<double> c = F.at(i, j);
            if (k1 != nyq) out.u1.at(i, j) = two_pi * static_cast<double>(k1) * I * c;
            if (k2 != nyq) out.u2.at(i, j) = two_pi * static_cast<double>(k2) * I * c;
        }
    }
    return out;
}

VectorSpectralField riesz_perp_velocity(const SpectralField& theta_hat) {
    const Grid& g = theta_hat.grid;
    const int nyq = g.n / 2;
    // enough headroom for |k| up to 2^12 = 4096 per component
    constexpr int kbits = 12;
    VectorSpectralField out{SpectralField(g), SpectralField(g)};
    for (int i = 0; i < g.n; ++i) {
        const int k1 = g.wavenumber(i);
        for (int j = 0; j < g.n; ++j) {
            const int k2 = g.wavenumber(j);
            if ((k1 == 0 && k2 == 0) || k1 == nyq || k2 == nyq) continue;
            const std::complex<double> c = theta_hat.at(i, j);
            const double inv_mod = 1.0 / std::hypot(static_cast<double>(k1), k2);
            // s = i * theta(k) / |k|, mantissa-truncated componentwise
            const double sr = truncate_mantissa(-c.imag() * inv_mod, kbits);
            const double si = truncate_mantissa(c.real() * inv_mod, kbits);
            out.u1.at(i, j) = {-k2 * sr, -k2 * si};
            out.u2.at(i, j) = {k1 * sr, k1 * si};
        }
    }
    return out;
}

SpectralField dealias(const SpectralField& F) {
    const Grid& g = F.grid;
    const int limit = dealias_limit(g);
    SpectralField out(g);
    for (int i = 0; i < g.n; ++i) {
        const int k1 = std::abs(g.wavenumber(i));
        if (k1 > limit) continue;
        for (int j = 0; j < g.n; ++j) {
            const int k2 = std::abs(g.wavenumber(j));
            if (k2 > limit) continue;
            out.at(i, j) = F.at(i, j);
        }
    }
    out.coeffs[0] = 0.0;
    return out;
}

} // namespace sqg

// oracles.hpp
// Test-only reference implementations, independent of the library's compute
// paths: the singular-integral quadrature for D_gamma, a brute-force spectral
// convolution for the advection term, and a plain RK4 scalar integrator.

#pragma once

#include "sqg/datum.hpp"
#include "sqg/fft.hpp"
#include "sqg/field.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Kernel constant for the symbol (2 pi |k|)^sigma on [0,1]^2:
// c_sigma = (sigma/2) 2^sigma Gamma(1+sigma/2) / (pi Gamma(1-sigma/2))
inline double kernel_constant(double sigma) {
    return (sigma / 2.0) * std::pow(2.0, sigma) * std::tgamma(1.0 + sigma / 2.0) /
           (std::numbers::pi * std::tgamma(1.0 - sigma / 2.0));
}

// Direct periodic-kernel quadrature of
//   D_gamma[f](x) = c_gamma int_{R^2} [f(x) - f(x+y)]^2 / |y|^{2+gamma} dy
// for a band-limited f on a coarse grid: trigonometric upsampling to a fine
// grid, kernel images summed over |m|_inf <= m_img, analytic tail beyond.
inline sqg::ScalarField dgamma_quadrature(const sqg::ScalarField& f, double gamma,
                                          int fine_factor = 4, int m_img = 60,
                                          int m_far = 3000) {
    const int n = f.grid.n;
    const int nf = n * fine_factor;
    const double hf = 1.0 / nf;

    // zero-pad the spectrum onto the fine grid (exact for band-limited f)
    const sqg::SpectralField F = sqg::forward_transform(f);
    sqg::SpectralField Ff(sqg::Grid::of(nf));
    for (int i = 0; i < n; ++i) {
        const int k1 = f.grid.wavenumber(i);
        for (int j = 0; j < n; ++j) {
            const int k2 = f.grid.wavenumber(j);
            if (k1 == nf / 2 || k2 == nf / 2) continue;
            Ff.at_wave(k1, k2) = F.at(i, j);
        }
    }
    const sqg::ScalarField ff = sqg::inverse_transform(Ff);

    // periodic kernel K(y) = sum over images of |y+m|^{-2-gamma} on the fine grid
    std::vector<double> kernel(static_cast<std::size_t>(nf) * nf, 0.0);
    for (int i = 0; i < nf; ++i) {
        double y1 = i * hf;
        if (y1 >= 0.5) y1 -= 1.0;
        for (int j = 0; j < nf; ++j) {
            double y2 = j * hf;
            if (y2 >= 0.5) y2 -= 1.0;
            if (i == 0 && j == 0) continue; // integrand vanishes at y = 0
            double sum = 0.0;
            for (int m1 = -m_img; m1 <= m_img; ++m1)
                for (int m2 = -m_img; m2 <= m_img; ++m2)
                    sum += std::pow((y1 + m1) * (y1 + m1) + (y2 + m2) * (y2 + m2),
                                    -(2.0 + gamma) / 2.0);
            kernel[static_cast<std::size_t>(i) * nf + j] = sum;
        }
    }

    // tail of the image sum: lattice shells out to m_far, polar beyond
    double tail = 0.0;
    for (int m1 = -m_far; m1 <= m_far; ++m1)
        for (int m2 = -m_far; m2 <= m_far; ++m2)
            if (std::max(std::abs(m1), std::abs(m2)) > m_img)
                tail += std::pow(static_cast<double>(m1) * m1 + static_cast<double>(m2) * m2,
                                 -(2.0 + gamma) / 2.0);
    tail += two_pi / (gamma * std::pow(static_cast<double>(m_far), gamma));

    double l2sq = 0.0;
    for (double v : f.values) l2sq += v * v;
    l2sq /= static_cast<double>(f.values.size());

    const double cg = kernel_constant(gamma);
    const int r = fine_factor;
    sqg::ScalarField d(f.grid);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double fx = ff.at(i * r, j * r);
            double acc = 0.0;
            for (int a = 0; a < nf; ++a) {
                const double* krow = &kernel[static_cast<std::size_t>(a) * nf];
                const double* frow = &ff.values[static_cast<std::size_t>((i * r + a) % nf) * nf];
                const int base = j * r;
                for (int b = 0; b < nf; ++b) {
                    const double diff = fx - frow[(base + b) % nf];
                    acc += diff * diff * krow[b];
                }
            }
            d.at(i, j) = cg * (acc * hf * hf + (fx * fx + l2sq) * tail);
        }
    }
    return d;
}

// Brute-force spectral convolution of u . grad(theta) with u the Riesz
// velocity, summed over exact integer wavenumber pairs (no grid, no aliasing).
inline sqg::SpectralField advection_convolution(const sqg::SpectralField& theta) {
    const sqg::Grid& g = theta.grid;
    const int half = g.n / 2;
    sqg::SpectralField out(g);

    auto u_hat = [&](int p1, int p2, int comp) -> std::complex<double> {
        if (p1 == 0 && p2 == 0) return 0.0;
        const double mod = std::hypot(static_cast<double>(p1), p2);
        const std::complex<double> I(0.0, 1.0);
        const std::complex<double> t = theta.at_wave(p1, p2);
        return comp == 0 ? I * (-p2 / mod) * t : I * (p1 / mod) * t;
    };

    for (int k1 = -half + 1; k1 <= half - 1; ++k1) {
        for (int k2 = -half + 1; k2 <= half - 1; ++k2) {
            std::complex<double> acc = 0.0;
            for (int p1 = -half + 1; p1 <= half - 1; ++p1) {
                for (int p2 = -half + 1; p2 <= half - 1; ++p2) {
                    const int q1 = k1 - p1, q2 = k2 - p2;
                    if (q1 <= -half || q1 >= half || q2 <= -half || q2 >= half) continue;
                    const std::complex<double> grad1(0.0, two_pi * q1);
                    const std::complex<double> grad2(0.0, two_pi * q2);
                    const std::complex<double> t = theta.at_wave(q1, q2);
                    acc += u_hat(p1, p2, 0) * grad1 * t + u_hat(p1, p2, 1) * grad2 * t;
                }
            }
            out.at_wave(k1, k2) = acc;
        }
    }
    return out;
}

// classic RK4 for scalar autonomous ODEs
template <class F>
double rk4(F&& f, double y0, double t_max, int steps) {
    const double h = t_max / steps;
    double y = y0;
    for (int i = 0; i < steps; ++i) {
        const double k1 = f(y);
        const double k2 = f(y + 0.5 * h * k1);
        const double k3 = f(y + 0.5 * h * k2);
        const double k4 = f(y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return y;
}

// seeded band-limited random field, peak-normalized
inline sqg::ScalarField random_field(const sqg::Grid& g, int cutoff, double slope,
                                     std::uint64_t seed, double target_linf = 1.0) {
    sqg::InitialDatumSpec spec;
    spec.kind = sqg::InitialDatumSpec::Kind::random_spectrum;
    spec.cutoff = cutoff;
    spec.slope = slope;
    spec.seed = seed;
    sqg::ScalarField f = sqg::build_datum(spec, g);
    const double m = f.max_abs();
    if (m > 0.0 && target_linf > 0.0)
        for (double& v : f.values) v *= target_linf / m;
    return f;
}

} // namespace oracle

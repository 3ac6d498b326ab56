// field.hpp
// Grid bookkeeping and the three field value types everything else is built on.
// Conventions:
//   * domain [0,1]^2, n x n samples, row-major, value (i,j) sits at x = (i/n, j/n)
//   * spectral basis e^{2*pi*i k.x}; coefficients are true Fourier coefficients
//     (forward transform divides by n^2), index (i,j) carries wavenumber
//     k = (wrap(i), wrap(j)) with wrap(i) = i <= n/2 ? i : i-n
//   * mode (0,0) is pinned to zero (mean-free evolution)

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sqg {

// Thrown when a numerical invariant breaks at runtime (NaN/Inf, symmetry loss).
// Distinct from std::invalid_argument so callers can map it to "numerical
// blowup" rather than "bad usage".
struct NumericsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Grid {
    int n = 0;          // points per side, power of two, >= 16
    double spacing = 0; // 1/n, exact in binary for power-of-two n

    static Grid of(int n);

    bool operator==(const Grid&) const = default;

    // signed wavenumber for storage index i, in {-n/2+1, ..., n/2}
    int wavenumber(int i) const { return i <= n / 2 ? i : i - n; }
    // storage index for signed wavenumber k
    int index_of(int k) const { return k >= 0 ? k : k + n; }
    std::size_t size() const { return static_cast<std::size_t>(n) * n; }
};

struct ScalarField {
    Grid grid;
    std::vector<double> values; // row-major, values[i*n + j]

    ScalarField() = default;
    explicit ScalarField(Grid g) : grid(g), values(g.size(), 0.0) {}

    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * grid.n + j]; }
    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * grid.n + j]; }

    double max_abs() const;
    double mean() const;
    // all entries finite, else NumericsError
    void require_finite(const char* what) const;
    // |mean| <= 1e-12 * max|values|, else invalid_argument
    void require_zero_mean(const char* what) const;
};

struct SpectralField {
    Grid grid;
    std::vector<std::complex<double>> coeffs; // same layout as ScalarField

    SpectralField() = default;
    explicit SpectralField(Grid g) : grid(g), coeffs(g.size(), {0.0, 0.0}) {}

    std::complex<double>& at(int i, int j) {
        return coeffs[static_cast<std::size_t>(i) * grid.n + j];
    }
    std::complex<double> at(int i, int j) const {
        return coeffs[static_cast<std::size_t>(i) * grid.n + j];
    }
    // coefficient for signed wavenumber pair
    std::complex<double>& at_wave(int k1, int k2) {
        return at(grid.index_of(k1), grid.index_of(k2));
    }
    std::complex<double> at_wave(int k1, int k2) const {
        return at(grid.index_of(k1), grid.index_of(k2));
    }

    double max_abs() const;
    void require_finite(const char* what) const;
    // max_k |c(k) - conj(c(-k))| relative to max|c|
    double hermitian_defect() const;
    // squared l2 norm of the represented function (Parseval: sum |c_k|^2)
    double l2_norm_sq() const;
};

struct VectorSpectralField {
    SpectralField u1, u2;

    // max over modes of |k1*u1(k) + k2*u2(k)|; exact 0.0 for Riesz output
    double divergence_max_abs() const;
};

} // namespace sqg

#include "sqg/field.hpp"

#include <cmath>

namespace sqg {

Grid Grid::of(int n) {
    if (n < 16 || (n & (n - 1)) != 0)
        throw std::invalid_argument("grid size must be a power of two >= 16, got " +
                                    std::to_string(n));
    Grid g;
    g.n = n;
    g.spacing = 1.0 / n;
    return g;
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double ScalarField::mean() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

void ScalarField::require_finite(const char* what) const {
    for (double v : values)
        if (!std::isfinite(v)) throw NumericsError(std::string(what) + ": non-finite field value");
}

void ScalarField::require_zero_mean(const char* what) const {
    const double m = std::abs(mean());
    const double scale = max_abs();
    if (m > 1e-12 * scale && m > 0.0)
        throw std::invalid_argument(std::string(what) + ": field mean " + std::to_string(m) +
                                    " exceeds zero-mean tolerance");
}

double SpectralField::max_abs() const {
    double m = 0.0;
    for (const auto& c : coeffs) m = std::max(m, std::abs(c));
    return m;
}

void SpectralField::require_finite(const char* what) const {
    for (const auto& c : coeffs)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw NumericsError(std::string(what) + ": non-finite spectral coefficient");
}

double SpectralField::hermitian_defect() const {
    const int n = grid.n;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const int ic = (n - i) % n;
        for (int j = 0; j < n; ++j) {
            const int jc = (n - j) % n;
            worst = std::max(worst, std::abs(at(i, j) - std::conj(at(ic, jc))));
        }
    }
    return worst;
}

double SpectralField::l2_norm_sq() const {
    double s = 0.0;
    for (const auto& c : coeffs) s += std::norm(c);
    return s;
}

double VectorSpectralField::divergence_max_abs() const {
    const Grid& g = u1.grid;
    double worst = 0.0;
    for (int i = 0; i < g.n; ++i) {
        const double k1 = g.wavenumber(i);
        for (int j = 0; j < g.n; ++j) {
            const double k2 = g.wavenumber(j);
            worst = std::max(worst, std::abs(k1 * u1.at(i, j) + k2 * u2.at(i, j)));
        }
    }
    return worst;
}

} // namespace sqg

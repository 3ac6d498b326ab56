// operators.hpp
// Fourier-multiplier operators: fractional Laplacian, gradient, the
// perpendicular Riesz velocity map, and the 2/3-rule dealiasing projection.

#pragma once

#include "sqg/field.hpp"

namespace sqg {

// Largest retained |k_i| under the 2/3 rule.
inline int dealias_limit(const Grid& g) { return g.n / 3; }

// Lambda^sigma: multiplication by (2 pi |k|)^sigma, sigma in (0,2].
// Mode (0,0) stays zero.
SpectralField fractional_laplacian(const SpectralField& F, double sigma);

// Lambda^{-sigma}: multiplication by (2 pi |k|)^{-sigma} away from k = 0,
// sigma in (0,2].  The only sanctioned route to negative powers.
SpectralField inverse_fractional_laplacian(const SpectralField& F, double sigma);

// (2 pi i k_1 F, 2 pi i k_2 F); each component's own Nyquist line is zeroed so
// the output stays Hermitian.
VectorSpectralField gradient(const SpectralField& F);

// u = grad^perp Lambda^{-1} theta:  u(k) = i (-k2, k1)/|k| theta(k).
// The shared scalar i*theta(k)/|k| has its low mantissa bits cleared so the
// integer wavenumber scalings below stay exact, which makes the spectral
// divergence k1*u1 + k2*u2 identically 0.0 on every mode.  Nyquist lines and
// mode zero carry zero velocity.
VectorSpectralField riesz_perp_velocity(const SpectralField& theta_hat);

// Zero all coefficients with max(|k1|,|k2|) > n/3.
SpectralField dealias(const SpectralField& F);

} // namespace sqg

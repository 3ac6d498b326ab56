// fft.hpp
// Forward/inverse transforms between ScalarField and SpectralField, backed by
// FFTW (complex-to-complex, FFTW_ESTIMATE plans cached per grid size so the
// algorithm choice, and hence the rounding, is identical on every run).

#pragma once

#include "sqg/field.hpp"

namespace sqg {

// True Fourier coefficients: F(k) = (1/n^2) sum_x f(x) e^{-2 pi i k.x}.
// Mode (0,0) is forced to exactly zero afterwards.
SpectralField forward_transform(const ScalarField& f);

// f(x) = sum_k F(k) e^{+2 pi i k.x}, real part taken after checking that the
// input is Hermitian (defect <= 1e-10 relative) and the imaginary residue of
// the result is <= 1e-12 of the max magnitude.
ScalarField inverse_transform(const SpectralField& F);

} // namespace sqg

// datum.hpp
// Initial data construction: explicit mode lists and seeded random spectra
// with power-law decay.  Both produce real, zero-mean fields by Hermitian
// construction.

#pragma once

#include "sqg/field.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace sqg {

struct DatumMode {
    std::array<int, 2> k{1, 0};
    double amplitude = 1.0;
    double phase = 0.0; // contributes amplitude * cos(2 pi k.x + phase)
};

struct InitialDatumSpec {
    enum class Kind { modes, random_spectrum };
    Kind kind = Kind::modes;

    std::vector<DatumMode> modes;

    double slope = 4.0;       // |coeff(k)| proportional to |k|^{-slope}
    int cutoff = 8;           // max |k_i| for the random spectrum
    std::uint64_t seed = 0;   // phase generator seed

    double scale = 1.0; // overall multiplier (the sweep amplitude axis)

    void validate() const;
};

SpectralField build_datum_spectral(const InitialDatumSpec& spec, const Grid& grid);
ScalarField build_datum(const InitialDatumSpec& spec, const Grid& grid);

} // namespace sqg

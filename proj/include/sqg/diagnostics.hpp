// diagnostics.hpp
// Norms, seminorms, finite differences, the pointwise dissipation functional
// D_gamma, and the regularized Holder quotient machinery.  Everything here is
// a pure function of its inputs; repeated calls are bit-identical.

#pragma once

#include "sqg/field.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sqg {

// Lattice shifts h = (di, dj) * spacing with the torus metric
// |h| = min over periodic images.  Zero shifts are rejected.
struct ShiftSet {
    Grid grid;
    std::vector<std::array<int, 2>> offsets;

    // all axis-aligned lattice shifts plus dyadic diagonals, <= 4n entries
    static ShiftSet default_for(const Grid& g);
    // axis-aligned shifts only: (i,0) and (0,j), 1 <= i,j < n
    static ShiftSet axis_aligned(const Grid& g);
    // every nonzero lattice shift (n^2 - 1 entries; small grids only)
    static ShiftSet dense(const Grid& g);
    static ShiftSet single(const Grid& g, int di, int dj);

    // torus length of one shift
    double length(const std::array<int, 2>& off) const;
    void validate() const;
};

struct HolderProbe {
    double alpha = 0.5; // in (0,1)
    double xi = 0.0;    // regularization parameter, >= 0
    ShiftSet shifts;
};

struct VQuotientResult {
    double sup = 0.0;
    std::array<int, 2> argmax_x{0, 0};    // grid index (i,j)
    std::array<int, 2> argmax_shift{0, 0};
};

struct DiagnosticsRecord {
    double t = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
    std::map<double, double> sobolev;          // s -> |theta|_{H^s}
    std::vector<std::pair<double, double>> holder; // alpha -> seminorm estimate
    double v_sup = 0.0;
    double energy_residual = 0.0; // |l2^2 - l2_0^2 + 2 int |L^{g/2} theta|^2| / l2_0^2
    double dgamma_min = 0.0;
};

// Grid quadrature L^p norm; p = infinity gives max|f|.
double lp_norm(const ScalarField& f, double p);

// (sum_k (2 pi |k|)^{2s} |c_k|^2)^{1/2}, s in [-2, 4].
double sobolev_norm(const SpectralField& F, double s);

// Pointwise D_gamma[f] = 2 f Lambda^g f - Lambda^g(f^2), square dealiased.
ScalarField dissipation_functional(const ScalarField& f, double gamma);

// delta_h f(x) = f(x+h) - f(x), periodic.
ScalarField finite_difference(const ScalarField& f, const std::array<int, 2>& shift);

// Per-shift peak |delta_h f| with its first row-major maximizer; the sup
// factorizes over the x and h directions because the quotient's denominator
// does not depend on x.
struct ShiftAmplitudes {
    const ShiftSet* shifts = nullptr;
    std::vector<double> max_abs;               // per shift
    std::vector<std::array<int, 2>> argmax_x;  // per shift
};

ShiftAmplitudes compute_shift_amplitudes(const ScalarField& f, const ShiftSet& shifts);

// sup over shifts of amplitude / (xi^2 + |h|^2)^{alpha/2}
VQuotientResult v_sup_from(const ShiftAmplitudes& amps, double alpha, double xi);

// sup over x in grid, h in shifts of |delta_h f(x)| / |h|^alpha.
double holder_seminorm(const ScalarField& f, double alpha, const ShiftSet& shifts);

// sup of |delta_h f(x)| / (xi^2 + |h|^2)^{alpha/2}; with xi = 0 this is
// bit-identical to holder_seminorm (same code path).
VQuotientResult v_quotient(const ScalarField& f, const HolderProbe& probe);

// Smallest c0 making the nonlinear lower bound on D_gamma[delta_h f] hold over
// the sampled (x,h); a diagnostic estimate, not a proof.
double nonlinear_bound_probe(const ScalarField& f, double gamma, double alpha,
                             const ShiftSet& shifts);

// One stored trajectory checkpoint.
struct Checkpoint {
    double t = 0.0;
    ScalarField field;
};

// Max over matched checkpoints of the relative L2 mismatch between run_b and
// the rescaled run_a: run_b(x, t) vs lambda^{gamma-1} run_a(lambda x, lambda^gamma t).
double scaling_check(const std::vector<Checkpoint>& run_a, const std::vector<Checkpoint>& run_b,
                     int lambda, double gamma);

// CSV schema for DiagnosticsRecord rows (17 significant digits).
std::string diagnostics_csv_header(const std::vector<double>& alphas);
std::string diagnostics_csv_row(const DiagnosticsRecord& rec);

} // namespace sqg

#include "sqg/diagnostics.hpp"

#include "sqg/fft.hpp"
#include "sqg/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

namespace sqg {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

ShiftSet ShiftSet::default_for(const Grid& g) {
    ShiftSet s = axis_aligned(g);
    for (int d = 1; d < g.n / 2; d *= 2) {
        s.offsets.push_back({d, d});
        s.offsets.push_back({d, g.n - d}); // (d, -d) wrapped
    }
    s.validate();
    return s;
}

ShiftSet ShiftSet::axis_aligned(const Grid& g) {
    ShiftSet s;
    s.grid = g;
    for (int i = 1; i < g.n; ++i) s.offsets.push_back({i, 0});
    for (int j = 1; j < g.n; ++j) s.offsets.push_back({0, j});
    return s;
}

ShiftSet ShiftSet::dense(const Grid& g) {
    ShiftSet s;
    s.grid = g;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            if (i != 0 || j != 0) s.offsets.push_back({i, j});
    return s;
}

ShiftSet ShiftSet::single(const Grid& g, int di, int dj) {
    ShiftSet s;
    s.grid = g;
    s.offsets.push_back({((di % g.n) + g.n) % g.n, ((dj % g.n) + g.n) % g.n});
    s.validate();
    return s;
}

double ShiftSet::length(const std::array<int, 2>& off) const {
    const int n = grid.n;
    const int w1 = std::min(off[0], n - off[0]);
    const int w2 = std::min(off[1], n - off[1]);
    return grid.spacing * std::hypot(static_cast<double>(w1), static_cast<double>(w2));
}

void ShiftSet::validate() const {
    for (const auto& off : offsets) {
        if (off[0] == 0 && off[1] == 0) throw std::invalid_argument("ShiftSet: zero shift");
        if (off[0] < 0 || off[0] >= grid.n || off[1] < 0 || off[1] >= grid.n)
            throw std::invalid_argument("ShiftSet: shift outside lattice");
    }
}

double lp_norm(const ScalarField& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    if (std::isinf(p)) return f.max_abs();
    double s = 0.0;
    if (p == 2.0) {
        for (double v : f.values) s += v * v;
    } else {
        for (double v : f.values) s += std::pow(std::abs(v), p);
    }
    const double cell = f.grid.spacing * f.grid.spacing;
    return std::pow(s * cell, 1.0 / p);
}

double sobolev_norm(const SpectralField& F, double s) {
    if (!(s >= -2.0 && s <= 4.0))
        throw std::invalid_argument("sobolev_norm: order must lie in [-2,4]");
    const Grid& g = F.grid;
    double acc = 0.0;
    for (int i = 0; i < g.n; ++i) {
        const double k1 = g.wavenumber(i);
        for (int j = 0; j < g.n; ++j) {
            const double k2 = g.wavenumber(j);
            if (k1 == 0 && k2 == 0) continue;
            acc += std::pow(two_pi * std::hypot(k1, k2), 2.0 * s) * std::norm(F.at(i, j));
        }
    }
    return std::sqrt(acc);
}

ScalarField dissipation_functional(const ScalarField& f, double gamma) {
    const SpectralField F = forward_transform(f);
    const ScalarField lap_f = inverse_transform(fractional_laplacian(F, gamma));

    ScalarField sq(f.grid);
    for (std::size_t i = 0; i < f.values.size(); ++i) sq.values[i] = f.values[i] * f.values[i];
    const SpectralField SQ = dealias(forward_transform(sq));
    const ScalarField lap_sq = inverse_transform(fractional_laplacian(SQ, gamma));

    ScalarField d(f.grid);
    for (std::size_t i = 0; i < d.values.size(); ++i)
        d.values[i] = 2.0 * f.values[i] * lap_f.values[i] - lap_sq.values[i];
    return d;
}

ScalarField finite_difference(const ScalarField& f, const std::array<int, 2>& shift) {
    const int n = f.grid.n;
    const int di = ((shift[0] % n) + n) % n;
    const int dj = ((shift[1] % n) + n) % n;
    ScalarField out(f.grid);
    for (int i = 0; i < n; ++i) {
        const int is = (i + di) % n;
        for (int j = 0; j < n; ++j) {
            const int js = (j + dj) % n;
            out.at(i, j) = f.at(is, js) - f.at(i, j);
        }
    }
    return out;
}

ShiftAmplitudes compute_shift_amplitudes(const ScalarField& f, const ShiftSet& shifts) {
    if (shifts.offsets.empty()) throw std::invalid_argument("empty shift set");
    shifts.validate();
    if (shifts.grid.n != f.grid.n)
        throw std::invalid_argument("shift set grid does not match field grid");
    const int n = f.grid.n;
    ShiftAmplitudes out;
    out.shifts = &shifts;
    out.max_abs.reserve(shifts.offsets.size());
    out.argmax_x.reserve(shifts.offsets.size());
    for (const auto& off : shifts.offsets) {
        double best = -1.0;
        std::array<int, 2> arg{0, 0};
        for (int i = 0; i < n; ++i) {
            const double* row = &f.values[static_cast<std::size_t>(i) * n];
            const double* srow = &f.values[static_cast<std::size_t>((i + off[0]) % n) * n];
            const int dj = off[1];
            // wrapped column index split into two contiguous segments
            for (int j = 0; j < n - dj; ++j) {
                const double q = std::abs(srow[j + dj] - row[j]);
                if (q > best) {
                    best = q;
                    arg = {i, j};
                }
            }
            for (int j = n - dj; j < n; ++j) {
                const double q = std::abs(srow[j + dj - n] - row[j]);
                if (q > best) {
                    best = q;
                    arg = {i, j};
                }
            }
        }
        out.max_abs.push_back(best);
        out.argmax_x.push_back(arg);
    }
    return out;
}

VQuotientResult v_sup_from(const ShiftAmplitudes& amps, double alpha, double xi) {
    VQuotientResult best;
    const ShiftSet& shifts = *amps.shifts;
    for (std::size_t s = 0; s < shifts.offsets.size(); ++s) {
        const double h = shifts.length(shifts.offsets[s]);
        const double q = amps.max_abs[s] / std::pow(xi * xi + h * h, alpha / 2.0);
        if (q > best.sup) {
            best.sup = q;
            best.argmax_x = amps.argmax_x[s];
            best.argmax_shift = shifts.offsets[s];
        }
    }
    return best;
}

double holder_seminorm(const ScalarField& f, double alpha, const ShiftSet& shifts) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("holder_seminorm: alpha must lie in (0,1]");
    return v_sup_from(compute_shift_amplitudes(f, shifts), alpha, 0.0).sup;
}

VQuotientResult v_quotient(const ScalarField& f, const HolderProbe& probe) {
    if (!(probe.alpha > 0.0 && probe.alpha < 1.0))
        throw std::invalid_argument("v_quotient: alpha must lie in (0,1)");
    if (!(probe.xi >= 0.0)) throw std::invalid_argument("v_quotient: xi must be >= 0");
    return v_sup_from(compute_shift_amplitudes(f, probe.shifts), probe.alpha, probe.xi);
}

double nonlinear_bound_probe(const ScalarField& f, double gamma, double alpha,
                             const ShiftSet& shifts) {
    if (!(alpha > 1.0 - gamma && alpha < 1.0))
        throw std::invalid_argument("nonlinear_bound_probe: alpha must lie in (1-gamma, 1)");
    shifts.validate();
    const int n = f.grid.n;

    // v with xi = 0 over the same shift set
    const double v_sup = v_sup_from(compute_shift_amplitudes(f, shifts), alpha, 0.0).sup;
    if (v_sup <= 0.0)
        throw std::invalid_argument("nonlinear_bound_probe: all sample points degenerate");

    const double expo = gamma / (1.0 - alpha);
    double c0 = 0.0;
    bool any = false;
    for (const auto& off : shifts.offsets) {
        const ScalarField df = finite_difference(f, off);
        const ScalarField dgam = dissipation_functional(df, gamma);
        const double scale =
            df.max_abs() *
            inverse_transform(fractional_laplacian(forward_transform(df), gamma)).max_abs();
        const double h = shifts.length(off);
        const double hg = std::pow(h, gamma);
        const double inv_denom = std::pow(h, -alpha);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double d = dgam.at(i, j);
                if (!(d > 1e-12 * scale)) continue;
                const double dtheta = std::abs(df.at(i, j));
                const double vratio = dtheta * inv_denom / v_sup;
                const double cand = std::pow(vratio, expo) * dtheta * dtheta / (hg * d);
                c0 = std::max(c0, cand);
                any = true;
            }
        }
    }
    if (!any) throw std::invalid_argument("nonlinear_bound_probe: all sample points degenerate");
    return c0;
}

double scaling_check(const std::vector<Checkpoint>& run_a, const std::vector<Checkpoint>& run_b,
                     int lambda, double gamma) {
    if (lambda < 1) throw std::invalid_argument("scaling_check: lambda must be >= 1");
    const double rate = std::pow(static_cast<double>(lambda), gamma);
    const double amp = std::pow(static_cast<double>(lambda), gamma - 1.0);
    double worst = 0.0;
    for (const auto& cb : run_b) {
        const double ta = cb.t * rate;
        const Checkpoint* match = nullptr;
        for (const auto& ca : run_a)
            if (std::abs(ca.t - ta) <= 1e-9 * std::max(1.0, ta)) {
                match = &ca;
                break;
            }
        if (!match)
            throw std::invalid_argument("scaling_check: no checkpoint in run_a at t = " +
                                        std::to_string(ta));
        const int n = cb.field.grid.n;
        if (match->field.grid.n != n)
            throw std::invalid_argument("scaling_check: checkpoint grids differ");
        double num = 0.0, den = 0.0;
        for (int i = 0; i < n; ++i) {
            const int il = (static_cast<long>(i) * lambda) % n;
            for (int j = 0; j < n; ++j) {
                const int jl = (static_cast<long>(j) * lambda) % n;
                const double ref = amp * match->field.at(il, jl);
                const double diff = cb.field.at(i, j) - ref;
                num += diff * diff;
                den += ref * ref;
            }
        }
        if (den > 0.0) worst = std::max(worst, std::sqrt(num / den));
    }
    return worst;
}

std::string diagnostics_csv_header(const std::vector<double>& alphas) {
    std::ostringstream os;
    os << "t,l2,linf,h_gamma_half,h2,h2_gamma_half";
    for (double a : alphas) {
        std::ostringstream name;
        name << "holder_" << a;
        os << "," << name.str();
    }
    os << ",v_sup,energy_residual,dgamma_min";
    return os.str();
}

std::string diagnostics_csv_row(const DiagnosticsRecord& rec) {
    std::ostringstream os;
    os << fmt17(rec.t) << "," << fmt17(rec.l2) << "," << fmt17(rec.linf);
    // the three canonical Sobolev orders, in ascending key order
    for (const auto& [s, v] : rec.sobolev) {
        (void)s;
        os << "," << fmt17(v);
    }
    for (const auto& [a, v] : rec.holder) {
        (void)a;
        os << "," << fmt17(v);
    }
    os << "," << fmt17(rec.v_sup) << "," << fmt17(rec.energy_residual) << ","
       << fmt17(rec.dgamma_min);
    return os.str();
}

} // namespace sqg

#include <doctest.h>

#include "oracles.hpp"
#include "sqg/diagnostics.hpp"
#include "sqg/fft.hpp"
#include "sqg/operators.hpp"

#include <cmath>
#include <numbers>

using namespace sqg;
namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
const double inf = std::numeric_limits<double>::infinity();

ScalarField sine_x1(const Grid& g) {
    ScalarField f(g);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) f.at(i, j) = std::sin(two_pi * i * g.spacing);
    return f;
}
} // namespace

TEST_SUITE_BEGIN("diagnostics");

TEST_CASE("lp_norm") {
    const Grid g = Grid::of(64);
    const ScalarField zero(g);
    for (double p : {1.0, 2.0, inf}) CHECK(lp_norm(zero, p) == 0.0);

    const ScalarField f = sine_x1(g);
    CHECK(std::abs(lp_norm(f, 2.0) - std::sqrt(0.5)) <= 1e-10);
    CHECK(lp_norm(f, inf) == 1.0); // n divisible by 4: the peak is on the grid
    CHECK_THROWS_AS(lp_norm(f, 0.5), std::invalid_argument);
}

TEST_CASE("sobolev_norm") {
    const Grid g = Grid::of(64);
    CHECK(sobolev_norm(SpectralField(g), 1.0) == 0.0);

    const SpectralField F = forward_transform(sine_x1(g));
    CHECK(std::abs(sobolev_norm(F, 2.0) - two_pi * two_pi * std::sqrt(0.5)) <= 1e-10);

    const ScalarField r = oracle::random_field(g, 20, 2.0, 21);
    const SpectralField R = forward_transform(r);
    CHECK(std::abs(sobolev_norm(R, 0.0) - lp_norm(r, 2.0)) <= 1e-10);

    CHECK_THROWS_AS(sobolev_norm(F, 4.5), std::invalid_argument);
    CHECK_THROWS_AS(sobolev_norm(F, -2.5), std::invalid_argument);
}

TEST_CASE("finite_difference") {
    const Grid g = Grid::of(64);
    const ScalarField zero(g);
    CHECK(finite_difference(zero, {3, 5}).max_abs() == 0.0);

    // half-period shift of sin is -2 sin
    const ScalarField f = sine_x1(g);
    const ScalarField d = finite_difference(f, {g.n / 2, 0});
    double err = 0.0;
    for (std::size_t i = 0; i < d.values.size(); ++i)
        err = std::max(err, std::abs(d.values[i] + 2.0 * f.values[i]));
    CHECK(err <= 1e-12);

    SUBCASE("output mean vanishes") {
        const ScalarField r = oracle::random_field(g, 10, 1.5, 2);
        CHECK(std::abs(finite_difference(r, {5, 9}).mean()) <= 1e-13 * r.max_abs());
    }
    SUBCASE("difference operators along h and -h commute") {
        const ScalarField r = oracle::random_field(g, 10, 1.5, 23);
        const ScalarField ab = finite_difference(finite_difference(r, {3, 7}), {g.n - 3, g.n - 7});
        const ScalarField ba = finite_difference(finite_difference(r, {g.n - 3, g.n - 7}), {3, 7});
        double worst = 0.0;
        for (std::size_t i = 0; i < ab.values.size(); ++i)
            worst = std::max(worst, std::abs(ab.values[i] - ba.values[i]));
        CHECK(worst <= 4.0 * std::numeric_limits<double>::epsilon() * r.max_abs());
    }
}

TEST_CASE("shift sets") {
    const Grid g = Grid::of(64);
    SUBCASE("no zero shift allowed") {
        CHECK_THROWS_AS(ShiftSet::single(g, 0, 0), std::invalid_argument);
    }
    SUBCASE("torus metric uses the nearest image") {
        const ShiftSet s = ShiftSet::single(g, g.n - 1, 0); // h = (-1,0)/n wrapped
        CHECK(s.length(s.offsets[0]) == doctest::Approx(g.spacing).epsilon(1e-14));
        const ShiftSet d = ShiftSet::single(g, g.n / 2, g.n / 2);
        CHECK(d.length(d.offsets[0]) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    }
    SUBCASE("default set stays within the sample budget") {
        const ShiftSet s = ShiftSet::default_for(g);
        CHECK(s.offsets.size() <= static_cast<std::size_t>(4 * g.n));
        for (const auto& off : s.offsets)
            CHECK(s.length(off) <= std::sqrt(2.0) / 2.0 + 1e-15);
    }
}

TEST_CASE("holder_seminorm") {
    const Grid g = Grid::of(256);
    const ScalarField f = sine_x1(g);

    SUBCASE("constant field has zero seminorm") {
        CHECK(holder_seminorm(ScalarField(g), 0.5, ShiftSet::axis_aligned(g)) == 0.0);
    }
    SUBCASE("alpha = 1 approaches the Lipschitz constant from below") {
        const double hs = holder_seminorm(f, 1.0, ShiftSet::axis_aligned(g));
        CHECK(hs <= two_pi + 1e-12);
        CHECK(hs >= 0.99 * two_pi);
    }
    SUBCASE("half-period shift, alpha = 1/2") {
        const double hs = holder_seminorm(f, 0.5, ShiftSet::single(g, g.n / 2, 0));
        CHECK(std::abs(hs - 2.0 * std::sqrt(2.0)) <= 1e-12);
    }
    SUBCASE("empty shift set is an error") {
        ShiftSet empty;
        empty.grid = g;
        CHECK_THROWS_AS(holder_seminorm(f, 0.5, empty), std::invalid_argument);
    }
    SUBCASE("nondecreasing in alpha when all |h| <= 1") {
        const Grid gs = Grid::of(64);
        const ScalarField r = oracle::random_field(gs, 16, 1.5, 31);
        const ShiftSet shifts = ShiftSet::default_for(gs);
        const double a = holder_seminorm(r, 0.3, shifts);
        const double b = holder_seminorm(r, 0.6, shifts);
        const double c = holder_seminorm(r, 0.9, shifts);
        CHECK(a <= b);
        CHECK(b <= c);
    }
}

TEST_CASE("v_quotient") {
    const Grid g = Grid::of(64);
    const ScalarField f = sine_x1(g);

    SUBCASE("xi = 0 coincides with the Holder seminorm bitwise") {
        const ScalarField r = oracle::random_field(g, 16, 1.5, 37);
        const ShiftSet shifts = ShiftSet::default_for(g);
        for (double alpha : {0.3, 0.55, 0.8}) {
            const double hs = holder_seminorm(r, alpha, shifts);
            const double vs = v_quotient(r, {alpha, 0.0, shifts}).sup;
            CHECK(hs == vs);
        }
    }
    SUBCASE("half-period shift with xi = 1, alpha = 1/2") {
        const auto res = v_quotient(f, {0.5, 1.0, ShiftSet::single(g, g.n / 2, 0)});
        CHECK(std::abs(res.sup - 2.0 / std::pow(1.25, 0.25)) <= 1e-12);
        CHECK(res.argmax_shift[0] == g.n / 2);
    }
    SUBCASE("the L-infinity cap 2|f|_inf xi^-alpha holds") {
        for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
            const ScalarField r = oracle::random_field(g, 16, 2.0, seed);
            const ShiftSet shifts = ShiftSet::default_for(g);
            for (double xi : {0.1, 1.0}) {
                const double vs = v_quotient(r, {0.4, xi, shifts}).sup;
                CHECK(vs <= 2.0 * r.max_abs() / std::pow(xi, 0.4));
            }
        }
    }
}

TEST_CASE("dissipation functional") {
    const Grid g = Grid::of(64);

    SUBCASE("zero field") {
        CHECK(dissipation_functional(ScalarField(g), 0.8).max_abs() == 0.0);
    }
    SUBCASE("sine at gamma = 1: pointwise nonnegative, mean 2 pi") {
        const ScalarField f = sine_x1(g);
        const ScalarField d = dissipation_functional(f, 1.0);
        double dmin = inf;
        for (double v : d.values) dmin = std::min(dmin, v);
        CHECK(dmin >= -1e-12);
        CHECK(std::abs(d.mean() - two_pi) <= 1e-10);
    }
    SUBCASE("mean identity and nonnegativity on random resolved fields") {
        for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
            for (double gamma : {0.6, 1.0}) {
                const ScalarField f = oracle::random_field(g, dealias_limit(g) / 2, 2.5, seed);
                const ScalarField d = dissipation_functional(f, gamma);
                const SpectralField F = forward_transform(f);
                const double want = 2.0 * std::pow(sobolev_norm(F, gamma / 2.0), 2.0);
                CHECK(std::abs(d.mean() - want) <= 1e-8 * want);

                const double scale =
                    f.max_abs() *
                    inverse_transform(fractional_laplacian(F, gamma)).max_abs();
                double dmin = inf;
                for (double v : d.values) dmin = std::min(dmin, v);
                CHECK(dmin >= -1e-8 * scale);
            }
        }
    }
    SUBCASE("matches the singular-integral quadrature on a coarse grid") {
        const Grid gc = Grid::of(32);
        for (double gamma : {0.6, 1.0}) {
            const ScalarField f = oracle::random_field(gc, 5, 1.5, 44);
            const ScalarField via_identity = dissipation_functional(f, gamma);
            const ScalarField via_quadrature = oracle::dgamma_quadrature(f, gamma);
            double dmax = 0.0, diff = 0.0;
            for (std::size_t i = 0; i < via_identity.values.size(); ++i) {
                dmax = std::max(dmax, std::abs(via_identity.values[i]));
                diff = std::max(diff,
                                std::abs(via_identity.values[i] - via_quadrature.values[i]));
            }
            CHECK(diff <= 0.05 * dmax);
        }
    }
}

TEST_CASE("nonlinear bound probe") {
    const Grid g = Grid::of(32);
    const ShiftSet shifts = ShiftSet::default_for(g);

    SUBCASE("zero field is degenerate") {
        CHECK_THROWS_AS(nonlinear_bound_probe(ScalarField(g), 0.8, 0.4, shifts),
                        std::invalid_argument);
    }
    SUBCASE("alpha window is enforced") {
        const ScalarField f = sine_x1(g);
        CHECK_THROWS_AS(nonlinear_bound_probe(f, 0.8, 0.1, shifts), std::invalid_argument);
    }
    SUBCASE("single mode gives a finite positive constant") {
        const ScalarField f = sine_x1(g);
        const double c0 = nonlinear_bound_probe(f, 0.8, 0.4, shifts);
        CHECK(c0 > 0.0);
        CHECK(std::isfinite(c0));
    }
    SUBCASE("scale invariance under f -> c f") {
        const ScalarField f = oracle::random_field(g, 5, 2.0, 55);
        ScalarField f3(g);
        for (std::size_t i = 0; i < f.values.size(); ++i) f3.values[i] = 3.0 * f.values[i];
        const double a = nonlinear_bound_probe(f, 0.8, 0.4, shifts);
        const double b = nonlinear_bound_probe(f3, 0.8, 0.4, shifts);
        CHECK(std::abs(a - b) <= 1e-10 * a);
    }
}

TEST_CASE("scaling_check trivial cases") {
    const Grid g = Grid::of(32);
    const ScalarField f = oracle::random_field(g, 5, 2.0, 61);
    std::vector<Checkpoint> traj{{0.0, f}};
    SUBCASE("lambda = 1 against itself") {
        CHECK(scaling_check(traj, traj, 1, 0.8) == 0.0);
    }
    SUBCASE("missing checkpoint") {
        std::vector<Checkpoint> other{{0.5, f}};
        CHECK_THROWS_AS(scaling_check(traj, other, 2, 0.8), std::invalid_argument);
    }
}

TEST_CASE("diagnostics CSV schema") {
    CHECK(diagnostics_csv_header({0.4, 0.7}) ==
          "t,l2,linf,h_gamma_half,h2,h2_gamma_half,holder_0.4,holder_0.7,v_sup,energy_residual,"
          "dgamma_min");
    DiagnosticsRecord rec;
    rec.t = 0.5;
    rec.l2 = 1.0;
    rec.linf = 2.0;
    rec.sobolev = {{0.4, 3.0}, {2.0, 4.0}, {2.4, 5.0}};
    rec.holder = {{0.4, 6.0}};
    rec.v_sup = 7.0;
    rec.energy_residual = 1e-9;
    rec.dgamma_min = -1e-12;
    CHECK(diagnostics_csv_row(rec) == "0.5,1,2,3,4,5,6,7,1.0000000000000001e-09,-1e-12");
}

TEST_SUITE_END();

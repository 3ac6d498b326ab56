// theory.hpp
// Closed-form bound evaluation: the regularization threshold xi0 and its decay
// trajectory, the eventual regularization time T* (two algebraic forms), the
// Holder ceiling M, the local existence time T1, the H^2 Riccati growth bound,
// the smallness criterion, and the threshold exponent gamma1(R).

#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json_fwd.hpp>

namespace sqg::theory {

// The universal constants the estimates are stated with.  The ODE constant
// c_star is tied to c0 by c_star = 1/(16 c0) and cannot drift independently.
struct UniversalConstants {
    double c0 = 1.0;     // nonlinear lower bound constant
    double c1 = 1.0;     // xi0 constant, >= 1
    double C0 = 2.0;     // local existence / criterion constant, >= 2
    double c_embed = 1.0; // L^inf <= c_embed sqrt(l2 h2) advisory check

    double c_star() const { return 1.0 / (16.0 * c0); }
    static UniversalConstants with_c_star(double c_star, double c1 = 1.0, double C0 = 2.0);
    void validate() const;
};

struct DatumNorms {
    double l2 = 0.0;
    double h2 = 0.0;
    double linf = 0.0;

    // critical size l2^{gamma/2} h2^{1-gamma/2}
    double critical_size(double gamma) const;
    // true when the supplied norms violate the 2-D embedding bound (warning-level)
    bool embedding_violated(const UniversalConstants& c) const;
};

struct AlphaChoice {
    double alpha = 0.0;
    bool valid = false; // alpha > 1 - gamma, required by the estimates
};

struct TStar {
    double composed = 0.0; // regtime composed with xi0
    double theorem = 0.0;  // headline formula with constant C0
    double ratio = 0.0;    // composed / theorem; the alpha-exponent gap
};

struct HolderCeiling {
    double m = 0.0;           // 4 linf / xi0^alpha
    double theorem_form = 0.0; // C0 alpha^{-alpha/(1-gamma)} linf^{-(gamma+alpha-1)/(1-gamma)}
};

struct RiccatiBound {
    double value = 0.0;
    double blowup_time = 0.0;
    bool diverged = false; // t >= blowup_time
};

struct CriterionResult {
    bool holds = false;
    double margin = 0.0; // log(LHS) - log(alpha)
};

struct Gamma1Result {
    double gamma1 = 1.0;
    bool saturated_low = false;  // criterion already holds at gamma0
    bool never_holds = false;    // criterion fails all the way to 1 - 1e-9
};

struct BoundsReport {
    double gamma = 0.0;
    double alpha = 0.0;
    bool alpha_valid = false;
    double xi0 = 0.0;
    double t_star_composed = 0.0;
    double t_star_theorem = 0.0;
    double m_ceiling = 0.0;
    double t1 = 0.0;
    bool t1_infinite = false;
    std::optional<double> gamma1;
    double criterion_margin = 0.0;
    bool criterion_holds = false;
    bool certified = false; // t_star_composed <= t1 and alpha valid
    double r_value = 0.0;
    DatumNorms norms;
    UniversalConstants constants;

    nlohmann::json to_json() const;
};

// alpha = min{2(1-gamma), 1/2}; valid iff alpha > 1 - gamma (gamma > 1/2).
AlphaChoice alpha_choice(double gamma);

// xi0 = (c1 alpha linf)^{1/(1-gamma)}; returns +0 for a zero datum.
double xi0(double gamma, double alpha, double linf, const UniversalConstants& c);

// xi(t) = [xi0^gamma - (gamma c*/alpha) t]^{1/gamma} clamped at 0 past T*.
double xi_trajectory(double t, double xi0_value, double gamma, double alpha,
                     const UniversalConstants& c);

// T* = (alpha/(gamma c*)) xi0^gamma, both composed and theorem forms.
TStar t_star(double gamma, double alpha, double linf, const UniversalConstants& c);

HolderCeiling holder_ceiling(double gamma, double alpha, double linf,
                             const UniversalConstants& c);

// T1 = 1/(C0 l2^{gamma/2} h2^{2-gamma/2}); infinity for a zero datum.
double t_local(double gamma, double l2, double h2, const UniversalConstants& c);

// y(t) <= y0 / (1 - (2-gamma/2) A y0^{2-gamma/2} t)^{1/(2-gamma/2)}.
RiccatiBound h2_growth_bound(double t, double y0, double gamma, double a_const);

// R^{-1/gamma} C0^{-2(1-gamma)/(gamma(2-gamma))} >= alpha, with alpha from
// alpha_choice; the equivalent pre-division form is evaluated as a cross-check.
CriterionResult criterion_check(double gamma, double r, const UniversalConstants& c);

// Smallest gamma (to 1e-9) such that the criterion holds on [gamma, 1).
Gamma1Result gamma1(double r, const UniversalConstants& c, double gamma0 = 0.05);

// Assemble every bound for one datum.
BoundsReport certify(const DatumNorms& norms, double gamma, const UniversalConstants& c,
                     bool with_gamma1 = false);

} // namespace sqg::theory

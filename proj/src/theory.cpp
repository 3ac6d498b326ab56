#include "sqg/theory.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <limits>

namespace sqg::theory {
namespace {

void require_gamma_open(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("gamma must lie in (0,1), got " + std::to_string(gamma));
}

void require_alpha_window(double gamma, double alpha) {
    // closed at 1 so the unit-value formula cases stay evaluable
    if (!(alpha > 1.0 - gamma && alpha <= 1.0))
        throw std::invalid_argument("alpha must lie in (1-gamma, 1]");
}

} // namespace

UniversalConstants UniversalConstants::with_c_star(double c_star, double c1, double C0) {
    if (!(c_star > 0.0)) throw std::invalid_argument("c_star must be positive");
    UniversalConstants c;
    c.c0 = 1.0 / (16.0 * c_star);
    c.c1 = c1;
    c.C0 = C0;
    c.validate();
    return c;
}

void UniversalConstants::validate() const {
    if (!(c0 > 0.0)) throw std::invalid_argument("c0 must be positive");
    if (!(c1 >= 1.0)) throw std::invalid_argument("c1 must be >= 1");
    // nominally >= 2; smaller values are allowed for formula exploration
    if (!(C0 > 0.0)) throw std::invalid_argument("C0 must be positive");
    if (!(c_embed > 0.0)) throw std::invalid_argument("c_embed must be positive");
}

double DatumNorms::critical_size(double gamma) const {
    return std::pow(l2, gamma / 2.0) * std::pow(h2, 1.0 - gamma / 2.0);
}

bool DatumNorms::embedding_violated(const UniversalConstants& c) const {
    return linf > c.c_embed * std::sqrt(l2 * h2) * (1.0 + 1e-12);
}

AlphaChoice alpha_choice(double gamma) {
    require_gamma_open(gamma);
    AlphaChoice a;
    a.alpha = std::min(2.0 * (1.0 - gamma), 0.5);
    a.valid = a.alpha > 1.0 - gamma; // equivalently gamma > 1/2
    return a;
}

double xi0(double gamma, double alpha, double linf, const UniversalConstants& c) {
    require_gamma_open(gamma);
    require_alpha_window(gamma, alpha);
    if (!(linf >= 0.0)) throw std::invalid_argument("linf must be >= 0");
    if (linf == 0.0) return 0.0;
    return std::pow(c.c1 * alpha * linf, 1.0 / (1.0 - gamma));
}

double xi_trajectory(double t, double xi0_value, double gamma, double alpha,
                     const UniversalConstants& c) {
    require_gamma_open(gamma);
    if (!(t >= 0.0)) throw std::invalid_argument("t must be >= 0");
    if (xi0_value <= 0.0) return 0.0;
    // hitting-time form: exactly zero at T* and beyond
    const double t_hit = alpha / (gamma * c.c_star()) * std::pow(xi0_value, gamma);
    if (t >= t_hit) return 0.0;
    return std::pow(std::pow(xi0_value, gamma) * (1.0 - t / t_hit), 1.0 / gamma);
}

TStar t_star(double gamma, double alpha, double linf, const UniversalConstants& c) {
    TStar out;
    const double x0 = xi0(gamma, alpha, linf, c);
    out.composed = (alpha / (gamma * c.c_star())) * std::pow(x0, gamma);
    out.theorem = c.C0 * std::pow(alpha, gamma * (2.0 - gamma) / (1.0 - gamma)) *
                  std::pow(linf, gamma / (1.0 - gamma));
    out.ratio = out.theorem > 0.0 ? out.composed / out.theorem
                                  : std::numeric_limits<double>::quiet_NaN();
    return out;
}

HolderCeiling holder_ceiling(double gamma, double alpha, double linf,
                             const UniversalConstants& c) {
    const double x0 = xi0(gamma, alpha, linf, c);
    if (x0 == 0.0) throw std::invalid_argument("holder_ceiling: xi0 is zero (zero datum)");
    HolderCeiling out;
    out.m = 4.0 * linf / std::pow(x0, alpha);
    out.theorem_form = c.C0 * std::pow(alpha, -alpha / (1.0 - gamma)) *
                       std::pow(linf, -(gamma + alpha - 1.0) / (1.0 - gamma));
    return out;
}

double t_local(double gamma, double l2, double h2, const UniversalConstants& c) {
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw std::invalid_argument("t_local: gamma must lie in (0,1]");
    if (!(l2 >= 0.0 && h2 >= 0.0)) throw std::invalid_argument("t_local: norms must be >= 0");
    const double denom = c.C0 * std::pow(l2, gamma / 2.0) * std::pow(h2, 2.0 - gamma / 2.0);
    if (denom == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / denom;
}

RiccatiBound h2_growth_bound(double t, double y0, double gamma, double a_const) {
    if (!(y0 > 0.0 && a_const > 0.0))
        throw std::invalid_argument("h2_growth_bound: y0 and A must be positive");
    const double p = 2.0 - gamma / 2.0;
    RiccatiBound out;
    out.blowup_time = 1.0 / (p * a_const * std::pow(y0, p));
    if (t >= out.blowup_time) {
        out.diverged = true;
        out.value = std::numeric_limits<double>::infinity();
        return out;
    }
    out.value = y0 / std::pow(1.0 - p * a_const * std::pow(y0, p) * t, 1.0 / p);
    return out;
}

CriterionResult criterion_check(double gamma, double r, const UniversalConstants& c) {
    require_gamma_open(gamma);
    if (!(r > 0.0)) throw std::invalid_argument("criterion_check: R must be positive");
    const double alpha = alpha_choice(gamma).alpha;

    // post-division form: R^{-1/gamma} C0^{-2(1-gamma)/(gamma(2-gamma))} >= alpha
    const double lhs = std::pow(r, -1.0 / gamma) *
                       std::pow(c.C0, -2.0 * (1.0 - gamma) / (gamma * (2.0 - gamma)));
    CriterionResult out;
    out.margin = std::log(lhs) - std::log(alpha);
    out.holds = out.margin >= 0.0;

    // pre-division form: C0^{-2} alpha^{-gamma(2-gamma)/(1-gamma)} >= R^{(2-gamma)/(1-gamma)}
    const double lhs1 = -2.0 * std::log(c.C0) -
                        gamma * (2.0 - gamma) / (1.0 - gamma) * std::log(alpha);
    const double rhs1 = (2.0 - gamma) / (1.0 - gamma) * std::log(r);
    const bool holds1 = lhs1 >= rhs1;
    // the forms are algebraically equivalent; disagreement away from the
    // margin-zero boundary is a bug
    if (holds1 != out.holds && std::abs(out.margin) > 1e-12)
        throw std::runtime_error("criterion_check: the two criterion forms disagree");
    return out;
}

Gamma1Result gamma1(double r, const UniversalConstants& c, double gamma0) {
    if (!(r > 0.0)) throw std::invalid_argument("gamma1: R must be positive");
    if (!(gamma0 > 0.0 && gamma0 < 1.0)) throw std::invalid_argument("gamma1: bad gamma0");
    const double top = 1.0 - 1e-9;
    auto holds = [&](double g) { return criterion_check(g, r, c).holds; };

    // coarse monotonicity scan: once true, must stay true
    Gamma1Result out;
    double first_true = -1.0;
    bool seen_true = false;
    for (double g = gamma0; g < top; g += 1e-3) {
        const bool h = holds(g);
        if (h && !seen_true) {
            seen_true = true;
            first_true = g;
        } else if (!h && seen_true) {
            throw std::runtime_error("gamma1: criterion is not monotone in gamma on the scan grid");
        }
    }
    if (!seen_true) {
        if (!holds(top)) {
            out.gamma1 = top;
            out.never_holds = true;
            return out;
        }
        first_true = top;
    }
    if (first_true == gamma0 && holds(gamma0)) {
        out.gamma1 = gamma0;
        out.saturated_low = true;
        return out;
    }

    double lo = std::max(gamma0, first_true - 1e-3); // holds is false here (or at gamma0)
    double hi = first_true;                          // holds is true here
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        if (holds(mid))
            hi = mid;
        else
            lo = mid;
    }
    out.gamma1 = hi;
    return out;
}

BoundsReport certify(const DatumNorms& norms, double gamma, const UniversalConstants& c,
                     bool with_gamma1) {
    require_gamma_open(gamma);
    c.validate();
    BoundsReport rep;
    rep.gamma = gamma;
    rep.norms = norms;
    rep.constants = c;
    const AlphaChoice a = alpha_choice(gamma);
    rep.alpha = a.alpha;
    rep.alpha_valid = a.valid;
    rep.r_value = norms.critical_size(gamma);

    rep.t1 = t_local(gamma, norms.l2, norms.h2, c);
    rep.t1_infinite = std::isinf(rep.t1);

    if (norms.linf > 0.0 && a.valid) {
        rep.xi0 = xi0(gamma, a.alpha, norms.linf, c);
        const TStar ts = t_star(gamma, a.alpha, norms.linf, c);
        rep.t_star_composed = ts.composed;
        rep.t_star_theorem = ts.theorem;
        rep.m_ceiling = holder_ceiling(gamma, a.alpha, norms.linf, c).m;
    }
    if (rep.r_value > 0.0) {
        const CriterionResult cr = criterion_check(gamma, rep.r_value, c);
        rep.criterion_margin = cr.margin;
        rep.criterion_holds = cr.holds;
        if (with_gamma1) rep.gamma1 = gamma1(rep.r_value, c).gamma1;
    } else {
        rep.criterion_holds = true;
        rep.criterion_margin = std::numeric_limits<double>::infinity();
    }
    rep.certified = a.valid && rep.t_star_composed <= rep.t1;
    return rep;
}

nlohmann::json BoundsReport::to_json() const {
    nlohmann::json j;
    j["gamma"] = gamma;
    j["alpha"] = alpha;
    j["alpha_valid"] = alpha_valid;
    j["xi0"] = xi0;
    j["t_star_composed"] = t_star_composed;
    j["t_star_theorem"] = t_star_theorem;
    j["M"] = m_ceiling;
    j["t1"] = t1_infinite ? nlohmann::json("inf") : nlohmann::json(t1);
    if (gamma1) j["gamma1"] = *gamma1;
    j["criterion_margin"] = criterion_margin;
    j["criterion_holds"] = criterion_holds;
    j["certified"] = certified;
    j["R"] = r_value;
    j["norms"] = {{"l2", norms.l2}, {"h2", norms.h2}, {"linf", norms.linf}};
    j["constants"] = {{"c0", constants.c0},
                      {"c1", constants.c1},
                      {"c_star", constants.c_star()},
                      {"C0", constants.C0},
                      {"c_embed", constants.c_embed}};
    return j;
}

} // namespace sqg::theory

// verify.hpp
// Built-in invariant suite: each check runs a small self-contained experiment
// and reports the measured violation against its threshold.

#pragma once

#include <string>
#include <vector>

namespace sqg::verify {

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;  // the violation / error actually observed
    double threshold = 0.0; // what it must stay below
    std::string detail;
};

struct VerifyOptions {
    int n = 128;             // resolution for the PDE-backed checks
    double gamma = 0.8;
    double t_end = 0.25;
    int lambda = 2;          // scaling-symmetry factor
    std::uint64_t seed = 20240801;
    bool flip_dissipation_sign = false; // fault-injection hook
};

CheckResult check_operator_exactness(int n = 64);
CheckResult check_linear_decay(int n = 32, double t_end = 1.0);
CheckResult check_maximum_principle(const VerifyOptions& opt);
CheckResult check_energy_balance(const VerifyOptions& opt);
CheckResult check_scaling_symmetry(const VerifyOptions& opt);
CheckResult check_dissipation_sign(const VerifyOptions& opt); // D_gamma >= 0 and mean identity
CheckResult check_holder_coherence(int n = 64, std::uint64_t seed = 7);
CheckResult check_xi_ode(int samples = 100, std::uint64_t seed = 11);
CheckResult check_h2_riccati(int samples = 100, std::uint64_t seed = 13);
CheckResult check_criterion_gamma1();

// All checks in a fixed order; names match the check functions.
std::vector<CheckResult> run_all(const VerifyOptions& opt);

// Single check by name ("operators", "linear_decay", "max_principle",
// "energy_balance", "scaling", "dgamma", "holder", "xi_ode", "h2_riccati",
// "criterion"); throws on unknown names.
CheckResult run_one(const std::string& name, const VerifyOptions& opt);

std::vector<std::string> check_names();

} // namespace sqg::verify

// bounds.hpp: coherence-to-entanglement bounds and the proof-chain verifier

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dephent/dynamics.hpp"
#include "dephent/povm_opt.hpp"
#include "dephent/ree_bracket.hpp"

namespace dephent {

// E_r >= C_r(rho_S) - H(I|M) for any POVM M on the environment ensemble.
double lower_bound_general(const State& rho_S, const Ensemble& e, const PovmX& m);

// Qubit system: C_r(rho_S) - 2 sqrt(p(1-p)) B(rho_0, rho_1), p = <0|rho_S|0>.
double lower_bound_qubit(const State& rho_S, const State& rho_0, const State& rho_1);

// C_r(rho_S) - C_r(sigma_S) + H(I), H(I) = S(Delta(rho_S)).
double upper_bound(const State& rho_S, const State& sigma_S);

// max{S(sigma_S) - S(sigma_SE), S(sigma_E) - S(sigma_SE)}
double neg_cond_entropy_bound(const State& sigma);

enum class PovmStrategy { Fixed, EnvEigenbasis, Optimized };

std::string to_string(PovmStrategy s);
PovmStrategy povm_strategy_from_string(const std::string& s);

struct ChainTolerances {
    double analytic = tol::kAnalytic;
    double optimizer = tol::kOptimizer;
    double bracket_tight = tol::kBracketTight;
    double bracket_loose = tol::kBracketLoose;
};

struct EvaluateOptions {
    PovmStrategy strategy = PovmStrategy::Optimized;
    std::optional<PovmX> fixed_povm;  // required for PovmStrategy::Fixed
    PovmSearchConfig povm_search;
    bool compute_ree = true;
    ReeSearchConfig ree_search;
    ChainTolerances tolerances;
};

struct ChainCheck {
    std::string name;
    bool applicable;
    bool ok;
    double slack;  // rhs - lhs of the inequality; negative beyond tolerance means failure
};

struct BoundReport {
    double t = 0.0;
    Eigen::Index d_S = 0;
    Eigen::Index d_E = 0;
    double C_r_initial = 0.0;
    double C_r_final = 0.0;
    double H_I = 0.0;
    double H_I_given_M = 0.0;
    std::optional<double> p;           // <0|rho_S|0>, qubit systems only
    std::optional<double> fidelity_B;  // B(rho_0(t), rho_1(t)), qubit systems only
    double lower_general = 0.0;
    std::optional<double> lower_qubit;
    double lower_clamped = 0.0;
    double neg_cond_entropy = 0.0;
    double mutual_info = 0.0;
    double upper = 0.0;
    double S_sigma_S = 0.0;
    double S_sigma_E = 0.0;
    double S_sigma_SE = 0.0;
    double holevo_chi = 0.0;
    double accessible_info_estimate = 0.0;  // I(I:M) at the POVM used; a lower estimate
    double heuristic_info = 0.0;            // I(I:M) for the environment eigenbasis measurement
    std::optional<double> jain;             // h(p) - 2 sqrt(p(1-p)) B, qubit systems only
    std::optional<double> ree_bracket_low;
    std::optional<double> ree_bracket_high;
    std::optional<bool> ppt;
    PovmStrategy strategy = PovmStrategy::Optimized;
    std::string povm_origin;
    std::vector<ChainCheck> chain;

    bool chain_ok() const;
    std::vector<std::string> failures() const;
};

BoundReport evaluate_instance(const DephasingModel& model, const State& rho_S, const State& rho_E, double t,
                              const EvaluateOptions& options = {});

}  // namespace dephent

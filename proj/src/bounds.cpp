#include "dephent/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace dephent {

namespace {

constexpr double kPurityTolerance = 1e-10;
constexpr double kDiagonalTolerance = 1e-12;

bool is_pure(const State& rho) { return rho.purity() >= 1.0 - kPurityTolerance; }

bool is_diagonal(const State& rho) {
    MatrixXc off = rho.matrix();
    off.diagonal().setZero();
    return off.size() == 0 || off.cwiseAbs().maxCoeff() <= kDiagonalTolerance;
}

// lhs <= rhs + tolerance
ChainCheck le(std::string name, bool applicable, double lhs, double rhs, double tolerance) {
    const double slack = rhs - lhs;
    return {std::move(name), applicable, !applicable || slack >= -tolerance, slack};
}

}  // namespace

double lower_bound_general(const State& rho_S, const Ensemble& e, const PovmX& m) {
    if (static_cast<Eigen::Index>(e.size()) != rho_S.dim()) {
        throw std::invalid_argument("lower_bound_general: ensemble size differs from system dimension");
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
        const double diag = rho_S.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
        if (std::abs(diag - e.prob(i)) > 1e-10) {
            throw std::invalid_argument("lower_bound_general: ensemble probabilities do not match the pointer diagonal");
        }
    }
    return coherence_rel_entropy(rho_S) - conditional_entropy(e, m);
}

double lower_bound_qubit(const State& rho_S, const State& rho_0, const State& rho_1) {
    if (rho_S.dim() != 2) throw std::invalid_argument("lower_bound_qubit: system must be a qubit");
    const double p = std::clamp(rho_S.matrix()(0, 0).real(), 0.0, 1.0);
    return coherence_rel_entropy(rho_S) - 2.0 * std::sqrt(p * (1.0 - p)) * fidelity(rho_0, rho_1);
}

double upper_bound(const State& rho_S, const State& sigma_S) {
    if (rho_S.dim() != sigma_S.dim()) throw std::invalid_argument("upper_bound: dimension mismatch");
    const double h_index = von_neumann_entropy(dephase(rho_S));
    return coherence_rel_entropy(rho_S) - coherence_rel_entropy(sigma_S) + h_index;
}

double neg_cond_entropy_bound(const State& sigma) {
    if (sigma.subsystems() != 2) throw std::invalid_argument("neg_cond_entropy_bound: state must be bipartite");
    const double joint = von_neumann_entropy(sigma);
    return std::max(von_neumann_entropy(partial_trace(sigma, 0)) - joint,
                    von_neumann_entropy(partial_trace(sigma, 1)) - joint);
}

std::string to_string(PovmStrategy s) {
    switch (s) {
        case PovmStrategy::Fixed: return "fixed";
        case PovmStrategy::EnvEigenbasis: return "env_eigenbasis";
        case PovmStrategy::Optimized: return "optimized";
    }
    return "unknown";
}

PovmStrategy povm_strategy_from_string(const std::string& s) {
    if (s == "fixed") return PovmStrategy::Fixed;
    if (s == "env_eigenbasis") return PovmStrategy::EnvEigenbasis;
    if (s == "optimized") return PovmStrategy::Optimized;
    throw std::invalid_argument("unknown POVM strategy '" + s + "'");
}

bool BoundReport::chain_ok() const {
    for (const auto& c : chain)
        if (!c.ok) return false;
    return true;
}

std::vector<std::string> BoundReport::failures() const {
    std::vector<std::string> out;
    for (const auto& c : chain)
        if (!c.ok) out.push_back(c.name);
    return out;
}

BoundReport evaluate_instance(const DephasingModel& model, const State& rho_S, const State& rho_E, double t,
                              const EvaluateOptions& options) {
    const ChainTolerances& tl = options.tolerances;
    BoundReport r;
    r.t = t;
    r.d_S = model.system_dim();
    r.d_E = model.env_dim();
    r.strategy = options.strategy;

    const State sigma = evolve(model, rho_S, rho_E, t);
    const State sigma_S = partial_trace(sigma, 0);
    const State sigma_E = partial_trace(sigma, 1);
    const Ensemble ensemble = env_ensemble(model, rho_S, rho_E, t);

    r.C_r_initial = coherence_rel_entropy(rho_S);
    r.C_r_final = coherence_rel_entropy(sigma_S);
    r.H_I = von_neumann_entropy(dephase(rho_S));
    r.S_sigma_S = von_neumann_entropy(sigma_S);
    r.S_sigma_E = von_neumann_entropy(sigma_E);
    r.S_sigma_SE = von_neumann_entropy(sigma);
    r.holevo_chi = holevo_chi(ensemble);

    const PovmX heuristic = env_eigenbasis_povm(ensemble);
    r.heuristic_info = mutual_info_classical(ensemble, heuristic);

    std::optional<PovmX> povm;
    switch (options.strategy) {
        case PovmStrategy::Fixed:
            if (!options.fixed_povm) throw std::invalid_argument("evaluate_instance: fixed strategy needs a POVM");
            povm = *options.fixed_povm;
            r.povm_origin = "input";
            break;
        case PovmStrategy::EnvEigenbasis:
            povm = heuristic;
            r.povm_origin = "env_eigenbasis";
            break;
        case PovmStrategy::Optimized: {
            PovmSearchResult res = optimize_povm(ensemble, options.povm_search);
            povm = std::move(res.povm);
            r.povm_origin = res.origin;
            break;
        }
    }
    r.H_I_given_M = conditional_entropy(ensemble, *povm);
    r.accessible_info_estimate = mutual_info_classical(ensemble, *povm);
    r.lower_general = lower_bound_general(rho_S, ensemble, *povm);
    r.lower_clamped = std::max(0.0, r.lower_general);

    if (r.d_S == 2) {
        r.p = std::clamp(rho_S.matrix()(0, 0).real(), 0.0, 1.0);
        r.fidelity_B = fidelity(ensemble.state(0), ensemble.state(1));
        r.lower_qubit = lower_bound_qubit(rho_S, ensemble.state(0), ensemble.state(1));
        r.jain = jain_bound(*r.p, *r.fidelity_B);
        r.lower_clamped = std::max(r.lower_clamped, *r.lower_qubit);
    }
    r.neg_cond_entropy = neg_cond_entropy_bound(sigma);
    r.mutual_info = quantum_mutual_info(sigma);
    r.upper = upper_bound(rho_S, sigma_S);

    if (options.compute_ree) {
        r.ree_bracket_low = ree_lower_bracket(sigma);
        r.ree_bracket_high = ree_upper_bracket(sigma, options.ree_search).value;
        r.ppt = is_ppt(sigma).ppt;
    }

    const bool optimized = options.strategy == PovmStrategy::Optimized;
    const bool qubit = r.d_S == 2;
    const bool pure = is_pure(rho_S) && is_pure(rho_E);
    const bool incoherent = is_diagonal(rho_S);
    const bool ree = options.compute_ree;

    auto& c = r.chain;
    c.push_back(le("1_lower_general_le_env_conditional", true, r.lower_general, r.S_sigma_E - r.S_sigma_SE,
                   tl.analytic));
    c.push_back(le("2_lower_qubit_le_lower_general", qubit && optimized, r.lower_qubit.value_or(0.0),
                   r.lower_general, tl.optimizer));
    c.push_back(le("3_neg_cond_entropy_le_mutual_info", true, r.neg_cond_entropy, r.mutual_info, tl.analytic));
    c.push_back(le("4_mutual_info_le_upper", true, r.mutual_info, r.upper, tl.analytic));
    {
        const double lower = std::max(r.lower_general, r.lower_qubit.value_or(r.lower_general));
        ChainCheck a = le("5_pure_lower_le_entanglement", pure, lower, r.S_sigma_S, tl.analytic);
        ChainCheck b = le("5_pure_entanglement_le_upper", pure, r.S_sigma_S, r.upper, tl.analytic);
        c.push_back(std::move(a));
        c.push_back(std::move(b));
    }
    c.push_back(le("6_incoherent_lower_clamped_zero", incoherent, r.lower_clamped, 0.0, tl.analytic));
    c.push_back(le("6_incoherent_ree_high_zero", incoherent && ree, r.ree_bracket_high.value_or(0.0), 0.0,
                   tl.bracket_tight));
    c.push_back(le("upper_nonnegative", true, 0.0, r.upper, tl.analytic));
    c.push_back(le("povm_le_holevo", true, r.accessible_info_estimate, r.holevo_chi, tl.analytic));
    c.push_back(le("povm_ge_heuristic", optimized, r.heuristic_info, r.accessible_info_estimate, tl.analytic));
    c.push_back(le("povm_ge_jain", optimized && qubit, r.jain.value_or(0.0), r.accessible_info_estimate,
                   tl.optimizer));
    c.push_back(le("ree_low_le_high", ree, r.ree_bracket_low.value_or(0.0), r.ree_bracket_high.value_or(0.0),
                   tl.bracket_tight));
    c.push_back(le("lower_general_le_ree_high", ree, r.lower_general, r.ree_bracket_high.value_or(0.0),
                   tl.bracket_loose));
    c.push_back(le("ree_high_le_mutual_info", ree, r.ree_bracket_high.value_or(0.0), r.mutual_info,
                   tl.bracket_loose));
    c.push_back(le("ppt_2x2_ree_high_zero", ree && r.d_S == 2 && r.d_E == 2 && r.ppt.value_or(false),
                   r.ree_bracket_high.value_or(0.0), 0.0, tl.bracket_loose));
    return r;
}

}  // namespace dephent

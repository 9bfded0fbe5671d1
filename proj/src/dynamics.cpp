#include "dephent/dynamics.hpp"

#include <stdexcept>
#include <string>

namespace dephent {

DephasingModel::DephasingModel(std::vector<double> pointer_energies, MatrixXc env_hamiltonian,
                               std::vector<MatrixXc> couplings)
    : pointer_energies_(std::move(pointer_energies)),
      env_hamiltonian_(std::move(env_hamiltonian)),
      couplings_(std::move(couplings)) {
    if (pointer_energies_.empty()) {
        throw std::invalid_argument("DephasingModel: system dimension must be positive");
    }
    if (couplings_.size() != pointer_energies_.size()) {
        throw std::invalid_argument("DephasingModel: need one coupling per pointer state");
    }
    const Eigen::Index d = env_hamiltonian_.rows();
    if (d == 0 || env_hamiltonian_.cols() != d) {
        throw std::invalid_argument("DephasingModel: environment Hamiltonian must be square and non-empty");
    }
    if (hermitian_defect(env_hamiltonian_) > tol::kHermitianInput) {
        throw std::invalid_argument("DephasingModel: environment Hamiltonian is not Hermitian");
    }
    for (std::size_t i = 0; i < couplings_.size(); ++i) {
        if (couplings_[i].rows() != d || couplings_[i].cols() != d) {
            throw std::invalid_argument("DephasingModel: coupling " + std::to_string(i) + " has wrong dimension");
        }
        if (hermitian_defect(couplings_[i]) > tol::kHermitianInput) {
            throw std::invalid_argument("DephasingModel: coupling " + std::to_string(i) + " is not Hermitian");
        }
    }
}

MatrixXc DephasingModel::conditional_hamiltonian(std::size_t i) const {
    return pointer_energies_.at(i) * MatrixXc::Identity(env_dim(), env_dim()) + env_hamiltonian_ + couplings_.at(i);
}

MatrixXc total_hamiltonian(const DephasingModel& model) {
    const Eigen::Index ds = model.system_dim();
    const Eigen::Index de = model.env_dim();
    MatrixXc h = MatrixXc::Zero(ds * de, ds * de);
    for (Eigen::Index i = 0; i < ds; ++i) {
        h.block(i * de, i * de, de, de) = model.conditional_hamiltonian(static_cast<std::size_t>(i));
    }
    return h;
}

std::vector<MatrixXc> conditional_unitaries(const DephasingModel& model, double t) {
    std::vector<MatrixXc> out;
    out.reserve(model.couplings().size());
    for (std::size_t i = 0; i < model.couplings().size(); ++i) {
        out.push_back(unitary_exp(model.conditional_hamiltonian(i), t));
    }
    return out;
}

namespace {

void check_inputs(const DephasingModel& model, const State& rho_S, const State& rho_E, const char* who) {
    if (rho_S.dim() != model.system_dim() || rho_E.dim() != model.env_dim()) {
        throw std::invalid_argument(std::string(who) + ": state dimensions do not match the model");
    }
}

}  // namespace

State evolve(const DephasingModel& model, const State& rho_S, const State& rho_E, double t) {
    check_inputs(model, rho_S, rho_E, "evolve");
    const auto us = conditional_unitaries(model, t);
    const Eigen::Index ds = model.system_dim();
    const Eigen::Index de = model.env_dim();
    std::vector<MatrixXc> left(us.size());
    for (std::size_t i = 0; i < us.size(); ++i) left[i] = us[i] * rho_E.matrix();
    MatrixXc sigma(ds * de, ds * de);
    for (Eigen::Index i = 0; i < ds; ++i) {
        for (Eigen::Index j = 0; j < ds; ++j) {
            sigma.block(i * de, j * de, de, de) =
                rho_S.matrix()(i, j) * left[static_cast<std::size_t>(i)] * us[static_cast<std::size_t>(j)].adjoint();
        }
    }
    return State(std::move(sigma), {ds, de});
}

Ensemble env_ensemble(const DephasingModel& model, const State& rho_S, const State& rho_E, double t) {
    check_inputs(model, rho_S, rho_E, "env_ensemble");
    const auto us = conditional_unitaries(model, t);
    std::vector<double> probs;
    std::vector<State> states;
    double total = 0.0;
    for (Eigen::Index i = 0; i < model.system_dim(); ++i) {
        const double p = std::max(0.0, rho_S.matrix()(i, i).real());
        probs.push_back(p);
        total += p;
        states.push_back(conjugate(rho_E, us[static_cast<std::size_t>(i)]));
    }
    for (double& p : probs) p /= total;
    return Ensemble(std::move(probs), std::move(states));
}

double pointer_commutator_defect(const MatrixXc& hamiltonian, Eigen::Index system_dim) {
    const Eigen::Index de = hamiltonian.rows() / system_dim;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < system_dim; ++i) {
        MatrixXc projector = MatrixXc::Zero(hamiltonian.rows(), hamiltonian.cols());
        projector.block(i * de, i * de, de, de) = MatrixXc::Identity(de, de);
        worst = std::max(worst, (projector * hamiltonian - hamiltonian * projector).cwiseAbs().maxCoeff());
    }
    return worst;
}

}  // namespace dephent

// dynamics.hpp: pure-dephasing Hamiltonians and controlled-unitary evolution
//
// H_tot = sum_i |i><i| (x) (eps_i + H_E + V_i), written in the pointer
// (computational) basis of the system. Callers with another pointer basis
// rotate their inputs first.

#pragma once

#include <vector>

#include "dephent/info.hpp"
#include "dephent/linalg.hpp"

namespace dephent {

using Ensemble = EnvEnsemble<double>;
using PovmX = Povm<double>;

class DephasingModel {
public:
    DephasingModel(std::vector<double> pointer_energies, MatrixXc env_hamiltonian, std::vector<MatrixXc> couplings);

    Eigen::Index system_dim() const { return static_cast<Eigen::Index>(pointer_energies_.size()); }
    Eigen::Index env_dim() const { return env_hamiltonian_.rows(); }

    const std::vector<double>& pointer_energies() const { return pointer_energies_; }
    const MatrixXc& env_hamiltonian() const { return env_hamiltonian_; }
    const std::vector<MatrixXc>& couplings() const { return couplings_; }

    // V_i' = eps_i + H_E + V_i
    MatrixXc conditional_hamiltonian(std::size_t i) const;

private:
    std::vector<double> pointer_energies_;
    MatrixXc env_hamiltonian_;
    std::vector<MatrixXc> couplings_;
};

MatrixXc total_hamiltonian(const DephasingModel& model);

// U_E^i(t) = exp(-i V_i' t), one per pointer index.
std::vector<MatrixXc> conditional_unitaries(const DephasingModel& model, double t);

// sigma_SE(t) = U (rho_S (x) rho_E) U^dagger
State evolve(const DephasingModel& model, const State& rho_S, const State& rho_E, double t);

// {<i|rho_S|i>, U_E^i rho_E U_E^i dagger}
Ensemble env_ensemble(const DephasingModel& model, const State& rho_S, const State& rho_E, double t);

// Largest entrywise commutator [|i><i| (x) I, H] over pointer indices.
double pointer_commutator_defect(const MatrixXc& hamiltonian, Eigen::Index system_dim);

}  // namespace dephent

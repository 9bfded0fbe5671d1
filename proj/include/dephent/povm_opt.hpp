// povm_opt.hpp: accessible-information search over POVMs on an ensemble
//
// The search maximizes I(I:M) = H(I) - H(I|M). The value it reports is a lower
// estimate of the accessible information; it is never claimed to be optimal.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dephent/dynamics.hpp"

namespace dephent {

struct PovmSearchConfig {
    int n_outcomes = 0;  // 0 selects d_E^2
    int restarts = 16;   // random restarts on top of the structured seeds
    int max_iters = 500;
    double step_tolerance = 1e-8;
    std::uint64_t seed = 0;
    unsigned parallelism = 1;

    void validate() const;
};

struct PovmSearchResult {
    PovmX povm;
    double value;        // I(I:M) at povm, bits
    std::string origin;  // which seed produced the winner
};

// I(I:M) = H(I) - H(I|M)
double mutual_info_classical(const Ensemble& e, const PovmX& m);

// h(p) - 2 sqrt(p(1-p)) b
double jain_bound(double p, double b);

PovmSearchResult optimize_povm(const Ensemble& e, const PovmSearchConfig& cfg = {});

// Projective measurement in the eigenbasis of the average state sigma_E.
PovmX env_eigenbasis_povm(const Ensemble& e);

// Projective measurement whose outcome statistics on (rho, sigma) have
// Bhattacharyya coefficient equal to B(rho, sigma).
PovmX fuchs_caves_povm(const State& rho, const State& sigma);

// Pretty-good measurement M_i = S^{-1/2} p_i rho_i S^{-1/2}, completed on ker S.
PovmX pretty_good_povm(const Ensemble& e);

// Rank-one POVM M_m = S^{-1/2} y_m y_m^dagger S^{-1/2}, S = sum_m y_m y_m^dagger,
// from the columns of y.
PovmX povm_from_vectors(const MatrixXc& y);

// Splits each element into rank-one pieces, returned as columns.
MatrixXc rank_one_vectors(const PovmX& m);

namespace detail {

// H(I|M) for the rank-one POVM built from the packed coordinates x and its
// gradient; exposed for derivative checks.
double povm_objective(const Ensemble& e, Eigen::Index n_outcomes, const Eigen::VectorXd& x, Eigen::VectorXd& grad);

Eigen::VectorXd pack_vectors(const MatrixXc& y);
MatrixXc unpack_vectors(const Eigen::VectorXd& x, Eigen::Index dim, Eigen::Index n);

}  // namespace detail

}  // namespace dephent

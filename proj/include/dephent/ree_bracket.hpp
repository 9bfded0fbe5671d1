// ree_bracket.hpp: two-sided brackets on the relative entropy of entanglement
//
// Upper bracket: S(sigma || xi) for an explicit separable xi found by local
// search. Lower bracket: the negative conditional entropy, clamped at zero.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dephent/linalg.hpp"

namespace dephent {

inline constexpr Eigen::Index kReeMaxDim = 36;
inline constexpr double kReeBlend = 1e-9;

// xi = (1 - blend) sum_k w_k |a_k><a_k| (x) |b_k><b_k| + blend I/d
struct SeparableAnsatz {
    Dims dims;
    std::vector<double> weights;
    std::vector<std::pair<VectorXc, VectorXc>> factors;
    double blend = 0.0;

    void validate() const;
    MatrixXc matrix() const;
};

struct PptResult {
    bool ppt;
    double min_eigenvalue;
};

PptResult is_ppt(const State& sigma);

struct ReeSearchConfig {
    int terms = 0;  // 0 selects (d_S d_E)^2
    int restarts = 4;
    int max_iters = 1000;
    double step_tolerance = 1e-10;
    std::uint64_t seed = 0;
    unsigned parallelism = 1;

    void validate() const;
};

struct ReeUpperResult {
    double value;  // bits; +infinity if no candidate has finite relative entropy
    SeparableAnsatz ansatz;
    std::string origin;
};

ReeUpperResult ree_upper_bracket(const State& sigma, const ReeSearchConfig& cfg = {});

// max{0, S(sigma_S) - S(sigma_SE), S(sigma_E) - S(sigma_SE)}
double ree_lower_bracket(const State& sigma);

namespace detail {

// S(sigma || xi) up to the constant -S(sigma), for packed ansatz coordinates,
// with gradient. Layout per term: logit, a (re, im), b (re, im).
double ree_objective(const MatrixXc& sigma, const Dims& dims, Eigen::Index terms, double blend,
                     const Eigen::VectorXd& x, Eigen::VectorXd& grad);

Eigen::VectorXd pack_ansatz(const SeparableAnsatz& ansatz);
SeparableAnsatz unpack_ansatz(const Eigen::VectorXd& x, const Dims& dims, Eigen::Index terms, double blend);

}  // namespace detail

}  // namespace dephent

// random_instances.hpp: seeded generators for models and states

#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "dephent/dynamics.hpp"

namespace dephent {

using Rng = std::mt19937_64;

// Independent stream for (seed, index); used for per-instance and per-restart RNGs.
Rng stream_rng(std::uint64_t seed, std::uint64_t index);

// Gaussian entries, symmetrized: (G + G^dagger) / 2 with unit-variance parts.
MatrixXc random_hermitian(Eigen::Index dim, Rng& rng, double scale = 1.0);

// Haar-random pure state.
State random_pure_state(Eigen::Index dim, Rng& rng);

// G G^dagger / Tr for G of shape dim x rank with complex Gaussian entries.
State random_mixed_state(Eigen::Index dim, Eigen::Index rank, Rng& rng);

// Random diagonal (incoherent) state.
State random_diagonal_state(Eigen::Index dim, Rng& rng);

// (1 - alpha) |psi_theta><psi_theta| + alpha I/d with
// |psi_theta> = cos(theta/2)|0> + sin(theta/2) (|1> + ... + |d-1>)/sqrt(d-1).
// d = 2, theta = pi/2 gives (1 - alpha)|+><+| + alpha I/2.
State pointer_family_state(Eigen::Index dim, double alpha, double theta);

// (1 - alpha)|+><+| + alpha I/2
State mixedness_state(double alpha);

DephasingModel random_model(Eigen::Index system_dim, Eigen::Index env_dim, Rng& rng);

enum class InstanceKind { Generic, Family, PurePure, Diagonal };

std::string to_string(InstanceKind kind);

struct RandomInstance {
    DephasingModel model;
    State rho_S;
    State rho_E;
    double t;
    InstanceKind kind;
};

// t is drawn from [0, 2]; one in sixteen instances is evaluated at t = 0.
RandomInstance random_instance(Eigen::Index system_dim, Eigen::Index env_dim, InstanceKind kind, Rng& rng);

}  // namespace dephent

#include "dephent/random_instances.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dephent {

Rng stream_rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x5eedu};
    return Rng(seq);
}

namespace {

MatrixXc gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    MatrixXc g(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = {normal(rng), normal(rng)};
    return g;
}

}  // namespace

MatrixXc random_hermitian(Eigen::Index dim, Rng& rng, double scale) {
    const MatrixXc g = gaussian_matrix(dim, dim, rng);
    return scale * (g + g.adjoint()) / 2.0;
}

State random_pure_state(Eigen::Index dim, Rng& rng) {
    const VectorXc psi = gaussian_matrix(dim, 1, rng).col(0);
    return State::pure(psi);
}

State random_mixed_state(Eigen::Index dim, Eigen::Index rank, Rng& rng) {
    if (rank < 1 || rank > dim) throw std::invalid_argument("random_mixed_state: rank out of range");
    const MatrixXc g = gaussian_matrix(dim, rank, rng);
    return State::from_unnormalized(g * g.adjoint());
}

State random_diagonal_state(Eigen::Index dim, Rng& rng) {
    std::exponential_distribution<double> expo(1.0);
    Eigen::VectorXd w(dim);
    for (Eigen::Index i = 0; i < dim; ++i) w[i] = expo(rng);
    w /= w.sum();
    MatrixXc m = w.cast<std::complex<double>>().asDiagonal();
    return State(std::move(m));
}

State pointer_family_state(Eigen::Index dim, double alpha, double theta) {
    if (dim < 2) throw std::invalid_argument("pointer_family_state: dimension must be at least 2");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("pointer_family_state: alpha outside [0, 1]");
    VectorXc psi = VectorXc::Zero(dim);
    psi[0] = std::cos(theta / 2.0);
    const double rest = std::sin(theta / 2.0) / std::sqrt(static_cast<double>(dim - 1));
    for (Eigen::Index i = 1; i < dim; ++i) psi[i] = rest;
    const MatrixXc m = (1.0 - alpha) * psi * psi.adjoint() +
                       alpha * MatrixXc::Identity(dim, dim) / static_cast<double>(dim);
    return State(m);
}

State mixedness_state(double alpha) { return pointer_family_state(2, alpha, std::numbers::pi / 2.0); }

DephasingModel random_model(Eigen::Index system_dim, Eigen::Index env_dim, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> energies(static_cast<std::size_t>(system_dim));
    for (auto& e : energies) e = normal(rng);
    MatrixXc h_env = random_hermitian(env_dim, rng);
    std::vector<MatrixXc> couplings;
    for (Eigen::Index i = 0; i < system_dim; ++i) couplings.push_back(random_hermitian(env_dim, rng));
    return DephasingModel(std::move(energies), std::move(h_env), std::move(couplings));
}

std::string to_string(InstanceKind kind) {
    switch (kind) {
        case InstanceKind::Generic: return "generic";
        case InstanceKind::Family: return "family";
        case InstanceKind::PurePure: return "pure_pure";
        case InstanceKind::Diagonal: return "diagonal";
    }
    return "unknown";
}

RandomInstance random_instance(Eigen::Index system_dim, Eigen::Index env_dim, InstanceKind kind, Rng& rng) {
    DephasingModel model = random_model(system_dim, env_dim, rng);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto rank_of = [&](Eigen::Index d) {
        return std::uniform_int_distribution<Eigen::Index>(1, d)(rng);
    };
    State rho_S;
    State rho_E;
    switch (kind) {
        case InstanceKind::Generic:
            rho_S = random_mixed_state(system_dim, rank_of(system_dim), rng);
            rho_E = random_mixed_state(env_dim, rank_of(env_dim), rng);
            break;
        case InstanceKind::Family: {
            const double alpha = unit(rng);
            const double theta = std::numbers::pi * unit(rng);
            rho_S = pointer_family_state(system_dim, alpha, theta);
            rho_E = random_mixed_state(env_dim, rank_of(env_dim), rng);
            break;
        }
        case InstanceKind::PurePure:
            rho_S = random_pure_state(system_dim, rng);
            rho_E = random_pure_state(env_dim, rng);
            break;
        case InstanceKind::Diagonal:
            rho_S = random_diagonal_state(system_dim, rng);
            rho_E = random_mixed_state(env_dim, rank_of(env_dim), rng);
            break;
    }
    const bool at_origin = std::uniform_int_distribution<int>(0, 15)(rng) == 0;
    const double t = at_origin ? 0.0 : 2.0 * unit(rng);
    return {std::move(model), std::move(rho_S), std::move(rho_E), t, kind};
}

}  // namespace dephent

#include <doctest.h>

#include <numbers>

#include "dephent/dynamics.hpp"
#include "dephent/random_instances.hpp"
#include "oracles.hpp"

using namespace dephent;

namespace {

MatrixXc pauli(char which) {
    MatrixXc m(2, 2);
    if (which == 'x') m << 0, 1, 1, 0;
    if (which == 'z') m << 1, 0, 0, -1;
    return m;
}

}  // namespace

TEST_CASE("total Hamiltonian structure") {
    const DephasingModel idle({0.0, 0.0}, MatrixXc::Identity(2, 2), {MatrixXc::Zero(2, 2), MatrixXc::Zero(2, 2)});
    CHECK((total_hamiltonian(idle) - testing::loop_kron(MatrixXc::Identity(2, 2), MatrixXc::Identity(2, 2))).norm() ==
          0.0);

    const double g = 0.3;
    const DephasingModel zz({0.0, 0.0}, MatrixXc::Zero(2, 2), {g * pauli('z'), -g * pauli('z')});
    CHECK((total_hamiltonian(zz) - g * testing::loop_kron(pauli('z'), pauli('z'))).norm() < 1e-15);

    Rng rng = stream_rng(20, 0);
    const DephasingModel model = random_model(3, 4, rng);
    CHECK(pointer_commutator_defect(total_hamiltonian(model), 3) <= 1e-10);
    CHECK_THROWS_AS(DephasingModel({0.0}, MatrixXc::Zero(2, 2), {MatrixXc::Zero(3, 3)}), std::invalid_argument);
}

TEST_CASE("conditional unitaries") {
    Rng rng = stream_rng(21, 0);
    const DephasingModel model = random_model(2, 3, rng);
    for (const auto& u : conditional_unitaries(model, 0.0)) CHECK((u - MatrixXc::Identity(3, 3)).norm() < 1e-14);
    const auto fwd = conditional_unitaries(model, 0.8);
    const auto back = conditional_unitaries(model, -0.8);
    for (std::size_t i = 0; i < fwd.size(); ++i) CHECK((fwd[i] * back[i] - MatrixXc::Identity(3, 3)).norm() < 1e-10);

    // H_E = 0, diagonal V_i: pure phases
    const DephasingModel diag({0.0, 0.0}, MatrixXc::Zero(2, 2), {pauli('z'), -pauli('z')});
    const auto u = conditional_unitaries(diag, 0.4);
    CHECK(std::abs(u[0](0, 0) - std::polar(1.0, -0.4)) < 1e-14);
    CHECK(std::abs(u[1](0, 0) - std::polar(1.0, 0.4)) < 1e-14);
    CHECK(std::abs(u[0](0, 1)) < 1e-15);
}

TEST_CASE("evolution matches the full propagator") {
    Rng rng = stream_rng(22, 0);
    const DephasingModel model = random_model(3, 2, rng);
    const State rs = random_mixed_state(3, 2, rng);
    const State re = random_mixed_state(2, 2, rng);
    const double t = 1.3;
    const MatrixXc u = testing::taylor_unitary(total_hamiltonian(model), t);
    const MatrixXc oracle = u * testing::loop_kron(rs.matrix(), re.matrix()) * u.adjoint();
    const State sigma = evolve(model, rs, re, t);
    CHECK((sigma.matrix() - oracle).norm() < 1e-10);
    CHECK(sigma.subsystem_dims() == Dims{3, 2});
    // pointer populations are conserved
    const MatrixXc red = testing::loop_partial_trace(sigma.matrix(), 3, 2, 0);
    for (Eigen::Index i = 0; i < 3; ++i) CHECK(std::abs(red(i, i) - rs.matrix()(i, i)) < 1e-12);
    CHECK((evolve(model, rs, re, 0.0).matrix() - testing::loop_kron(rs.matrix(), re.matrix())).norm() < 1e-14);
}

TEST_CASE("orthogonalizing coupling yields a maximally entangled state") {
    const DephasingModel model({0.0, 0.0}, MatrixXc::Zero(2, 2), {pauli('x'), -pauli('x')});
    VectorXc plus(2), zero(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    zero << 1.0, 0.0;
    const State sigma = evolve(model, State::pure(plus), State::pure(zero), std::numbers::pi / 4.0);
    const State sys = partial_trace(sigma, 0);
    CHECK((sys.matrix() - MatrixXc::Identity(2, 2) / 2.0).norm() < 1e-12);
}

TEST_CASE("environment ensemble") {
    Rng rng = stream_rng(23, 0);
    const DephasingModel model = random_model(2, 3, rng);
    const State rs = random_mixed_state(2, 2, rng);
    const State re = random_mixed_state(3, 3, rng);
    const Ensemble at0 = env_ensemble(model, rs, re, 0.0);
    for (std::size_t i = 0; i < at0.size(); ++i) CHECK((at0.state(i).matrix() - re.matrix()).norm() < 1e-14);

    const Ensemble half = env_ensemble(model, State::maximally_mixed(2), re, 0.5);
    CHECK(half.prob(0) == doctest::Approx(0.5));
    CHECK(half.prob(1) == doctest::Approx(0.5));

    const double t = 0.9;
    const Ensemble e = env_ensemble(model, rs, re, t);
    const State sigma = evolve(model, rs, re, t);
    CHECK((e.mixture().matrix() - testing::loop_partial_trace(sigma.matrix(), 2, 3, 1)).norm() < 1e-12);
}

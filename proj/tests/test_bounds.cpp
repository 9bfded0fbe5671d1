#include <doctest.h>

#include <numbers>

#include "dephent/bounds.hpp"
#include "dephent/random_instances.hpp"
#include "dephent/spin_boson.hpp"
#include "oracles.hpp"

using namespace dephent;
using dephent::testing::h2;

namespace {

MatrixXc pauli_x() {
    MatrixXc m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

State ket(double a, double b, Dims dims = {}) {
    VectorXc v(2);
    v << a, b;
    return State::pure(v / v.norm(), std::move(dims));
}

State bell() {
    VectorXc psi = VectorXc::Zero(4);
    psi[0] = psi[3] = 1.0 / std::sqrt(2.0);
    return State::pure(psi, {2, 2});
}

}  // namespace

TEST_CASE("lower bound, general form") {
    Rng rng = stream_rng(50, 0);
    const State diag = random_diagonal_state(2, rng);
    const Ensemble e(std::vector<double>{diag.matrix()(0, 0).real(), diag.matrix()(1, 1).real()},
                     {random_mixed_state(2, 2, rng), random_mixed_state(2, 2, rng)});
    CHECK(lower_bound_general(diag, e, PovmX::projective(MatrixXc::Identity(2, 2))) <= 0.0);

    const Ensemble orth({0.5, 0.5}, {ket(1, 0), ket(0, 1)});
    CHECK(lower_bound_general(ket(1, 1), orth, PovmX::projective(MatrixXc::Identity(2, 2))) ==
          doctest::Approx(1.0).epsilon(1e-14));
    const Ensemble wrong({0.3, 0.7}, {ket(1, 0), ket(0, 1)});
    CHECK_THROWS_AS(lower_bound_general(ket(1, 1), wrong, PovmX::trivial(2)), std::invalid_argument);
}

TEST_CASE("lower bound, qubit form") {
    CHECK(lower_bound_qubit(mixedness_state(0.0), ket(1, 0), ket(0, 1)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(lower_bound_qubit(mixedness_state(1.0), ket(1, 0), ket(1, 1)) <= 0.0);
    CHECK(lower_bound_qubit(mixedness_state(0.0), ket(1, 0), ket(1, 0)) == doctest::Approx(0.0).epsilon(1e-7));
    CHECK_THROWS_AS(lower_bound_qubit(State::maximally_mixed(3), ket(1, 0), ket(1, 0)), std::invalid_argument);
}

TEST_CASE("upper bound and negative conditional entropy") {
    Rng rng = stream_rng(51, 0);
    const State diag = random_diagonal_state(3, rng);
    CHECK(upper_bound(diag, diag) == doctest::Approx(von_neumann_entropy(diag)).epsilon(1e-12));
    CHECK(upper_bound(ket(1, 1), State::maximally_mixed(2)) == doctest::Approx(2.0).epsilon(1e-12));

    const State prod = tensor(random_mixed_state(2, 2, rng), random_mixed_state(3, 2, rng));
    CHECK(neg_cond_entropy_bound(prod) <= 1e-12);
    CHECK(neg_cond_entropy_bound(bell()) == doctest::Approx(1.0).epsilon(1e-12));
    const State psi = random_pure_state(6, rng).with_dims({2, 3});
    CHECK(neg_cond_entropy_bound(psi) == doctest::Approx(von_neumann_entropy(partial_trace(psi, 0))).epsilon(1e-9));
    CHECK_THROWS_AS(neg_cond_entropy_bound(State::maximally_mixed(4)), std::invalid_argument);
}

TEST_CASE("instance at t = 0") {
    Rng rng = stream_rng(52, 0);
    const DephasingModel model = random_model(2, 3, rng);
    const State rs = random_mixed_state(2, 2, rng);
    const State re = random_mixed_state(3, 3, rng);
    const BoundReport r = evaluate_instance(model, rs, re, 0.0, {});
    CHECK(r.lower_general <= 1e-9);
    CHECK(*r.lower_qubit <= 1e-7);
    CHECK(r.mutual_info == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.upper == doctest::Approx(r.H_I).epsilon(1e-12));
    CHECK(*r.ree_bracket_high <= 1e-9);
    CHECK(r.chain_ok());
}

TEST_CASE("pure-pure 2x2 instance pinches the entanglement brackets") {
    const DephasingModel model({0.0, 0.0}, MatrixXc::Zero(2, 2), {pauli_x(), -pauli_x()});
    for (double t : {0.1, 0.3, 0.6}) {
        const BoundReport r = evaluate_instance(model, ket(1, 1), ket(1, 0), t, {});
        CHECK(r.chain_ok());
        CHECK(std::abs(*r.ree_bracket_high - r.S_sigma_S) <= 1e-4);
        CHECK(std::abs(*r.ree_bracket_low - r.S_sigma_S) <= 1e-4);
        CHECK(r.lower_general <= r.S_sigma_S + 1e-9);
        CHECK(r.S_sigma_S <= r.upper + 1e-9);
    }
}

TEST_CASE("random instances satisfy the chain") {
    for (std::uint64_t k = 0; k < 12; ++k) {
        Rng rng = stream_rng(53, k);
        const auto kind = static_cast<InstanceKind>(k % 4);
        const RandomInstance inst = random_instance(2 + k % 2, 2 + k % 3, kind, rng);
        EvaluateOptions opts;
        opts.ree_search.restarts = 1;
        opts.ree_search.terms = 16;
        const BoundReport r = evaluate_instance(inst.model, inst.rho_S, inst.rho_E, inst.t, opts);
        INFO("instance ", k, " failures ", r.failures().size());
        CHECK(r.chain_ok());
        CHECK(r.upper >= r.mutual_info - 1e-9);
        CHECK(r.lower_general <= r.neg_cond_entropy + 1e-9);
    }
}

TEST_CASE("single-mode spin-boson instance agrees with the spin-boson module") {
    const double omega = 1.0;
    const double g = 0.25;
    const double temperature = 0.4;
    const double alpha = 0.3;
    const ModeTruncation tr = mode_truncation(omega, g, temperature);
    const DephasingModel model = single_mode_model(omega, g, tr.total_levels);
    const State rho_E = truncated_thermal_state(omega, temperature, tr);
    const DiscreteBath bath{{omega}, {g}, 256};
    EvaluateOptions opts;
    opts.strategy = PovmStrategy::EnvEigenbasis;
    opts.compute_ree = false;
    for (double t : {0.5, 1.5, 3.0}) {
        const BoundReport r = evaluate_instance(model, mixedness_state(alpha), rho_E, t, opts);
        const double b = oracle_fidelity(bath, t, temperature);
        CHECK(*r.fidelity_B == doctest::Approx(b).epsilon(1e-9));
        CHECK(r.C_r_initial == doctest::Approx(1.0 - h2(alpha / 2.0)).epsilon(1e-12));
        CHECK(*r.lower_qubit == doctest::Approx(1.0 - h2(alpha / 2.0) - b).epsilon(1e-9));
    }
}

TEST_CASE("strategy names") {
    for (auto s : {PovmStrategy::Fixed, PovmStrategy::EnvEigenbasis, PovmStrategy::Optimized}) {
        CHECK(povm_strategy_from_string(to_string(s)) == s);
    }
    CHECK_THROWS_AS(povm_strategy_from_string("best"), std::invalid_argument);
}

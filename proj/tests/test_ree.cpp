#include <doctest.h>

#include "dephent/dynamics.hpp"
#include "dephent/ree_bracket.hpp"
#include "dephent/random_instances.hpp"
#include "oracles.hpp"

using namespace dephent;
using dephent::testing::h2;

namespace {

State bell() {
    VectorXc psi = VectorXc::Zero(4);
    psi[0] = psi[3] = 1.0 / std::sqrt(2.0);
    return State::pure(psi, {2, 2});
}

// F |Phi+><Phi+| + (1 - F)(I - |Phi+><Phi+|)/3
State werner(double f) {
    const MatrixXc phi = bell().matrix();
    return State(f * phi + (1.0 - f) * (MatrixXc::Identity(4, 4) - phi) / 3.0, {2, 2});
}

}  // namespace

TEST_CASE("PPT test") {
    Rng rng = stream_rng(40, 0);
    const State prod = tensor(random_mixed_state(2, 2, rng), random_mixed_state(2, 2, rng));
    CHECK(is_ppt(prod).ppt);
    const PptResult b = is_ppt(bell());
    CHECK_FALSE(b.ppt);
    CHECK(b.min_eigenvalue == doctest::Approx(-0.5).epsilon(1e-12));

    const DephasingModel model = random_model(2, 2, rng);
    const State sigma = evolve(model, random_diagonal_state(2, rng), random_mixed_state(2, 2, rng), 1.1);
    CHECK(is_ppt(sigma).ppt);
}

TEST_CASE("objective gradient matches finite differences") {
    Rng rng = stream_rng(41, 0);
    const State sigma = random_mixed_state(6, 6, rng).with_dims({2, 3});
    // enough terms for a full-rank xi, so finite differences stay well conditioned
    const Eigen::Index terms = 10;
    std::normal_distribution<double> normal;
    Eigen::VectorXd x(terms * (1 + 2 * 2 + 2 * 3));
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = normal(rng);
    Eigen::VectorXd grad;
    for (double blend : {kReeBlend, 0.05}) {
        detail::ree_objective(sigma.matrix(), {2, 3}, terms, blend, x, grad);
        const auto f = [&](const Eigen::VectorXd& y) {
            Eigen::VectorXd g;
            return detail::ree_objective(sigma.matrix(), {2, 3}, terms, blend, y, g);
        };
        const Eigen::VectorXd numeric = testing::numeric_gradient(f, x);
        CHECK((grad - numeric).norm() <= 1e-6 * std::max(1.0, numeric.norm()));
    }
}

TEST_CASE("brackets on known states") {
    Rng rng = stream_rng(42, 0);
    const State prod = tensor(random_mixed_state(2, 2, rng), random_mixed_state(3, 3, rng));
    CHECK(ree_upper_bracket(prod).value <= 1e-4);
    CHECK(ree_lower_bracket(prod) == 0.0);

    CHECK(ree_upper_bracket(bell()).value == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(ree_lower_bracket(bell()) == doctest::Approx(1.0).epsilon(1e-12));

    // Werner states: E_r = 1 - h(F) for F > 1/2
    for (double f : {0.6, 0.8, 0.95}) {
        const double oracle = 1.0 - h2(f);
        const double up = ree_upper_bracket(werner(f)).value;
        CHECK(up >= oracle - 1e-9);
        CHECK(up <= oracle + 1e-3);
    }

    // pure states: E_r equals the entropy of entanglement
    for (int k = 0; k < 5; ++k) {
        const State psi = random_pure_state(4, rng).with_dims({2, 2});
        const double ent = von_neumann_entropy(partial_trace(psi, 0));
        const double up = ree_upper_bracket(psi).value;
        CHECK(std::abs(up - ent) <= 1e-3);
        CHECK(ree_lower_bracket(psi) == doctest::Approx(ent).epsilon(1e-9));
    }
}

TEST_CASE("certificate ansatz reproduces the reported value") {
    Rng rng = stream_rng(43, 0);
    const State sigma = random_mixed_state(4, 2, rng).with_dims({2, 2});
    ReeSearchConfig cfg;
    cfg.restarts = 1;
    const ReeUpperResult r = ree_upper_bracket(sigma, cfg);
    CHECK_NOTHROW(r.ansatz.validate());
    const State xi(r.ansatz.matrix(), {2, 2});
    CHECK(relative_entropy(sigma, xi) == doctest::Approx(r.value).epsilon(1e-9));
    CHECK(is_ppt(xi).ppt);
    CHECK(r.value >= ree_lower_bracket(sigma) - 1e-9);
}

TEST_CASE("REE search is deterministic and respects the dimension cap") {
    Rng rng = stream_rng(44, 0);
    const State sigma = random_mixed_state(6, 3, rng).with_dims({2, 3});
    ReeSearchConfig cfg;
    cfg.seed = 5;
    cfg.restarts = 2;
    ReeSearchConfig par = cfg;
    par.parallelism = 2;
    CHECK(ree_upper_bracket(sigma, cfg).value == ree_upper_bracket(sigma, par).value);
    const State big = State::maximally_mixed(49).with_dims({7, 7});
    CHECK_THROWS_AS(ree_upper_bracket(big), std::invalid_argument);
    CHECK_THROWS_AS(ree_upper_bracket(State::maximally_mixed(4)), std::invalid_argument);
}

#include <doctest.h>

#include "dephent/povm_opt.hpp"
#include "dephent/random_instances.hpp"
#include "oracles.hpp"

using namespace dephent;
using dephent::testing::h2;

namespace {

Ensemble random_pair(Rng& rng, Eigen::Index dim, double p, Eigen::Index rank) {
    return Ensemble({p, 1.0 - p}, {random_mixed_state(dim, rank, rng), random_mixed_state(dim, rank, rng)});
}

double classical_bhattacharyya(const State& a, const State& b, const PovmX& m) {
    double sum = 0.0;
    for (const auto& e : m.elements()) {
        const double pa = std::max(0.0, (a.matrix() * e).trace().real());
        const double pb = std::max(0.0, (b.matrix() * e).trace().real());
        sum += std::sqrt(pa * pb);
    }
    return sum;
}

}  // namespace

TEST_CASE("Jain bound values") {
    CHECK(jain_bound(0.5, 0.0) == doctest::Approx(1.0));
    CHECK(jain_bound(0.5, 1.0) == doctest::Approx(0.0));
    CHECK(jain_bound(0.0, 0.3) == 0.0);
    CHECK(jain_bound(0.2, 0.5) == doctest::Approx(h2(0.2) - 2.0 * std::sqrt(0.16) * 0.5));
    CHECK_THROWS_AS(jain_bound(1.2, 0.5), std::invalid_argument);
}

TEST_CASE("objective gradient matches finite differences") {
    Rng rng = stream_rng(30, 0);
    const Ensemble e = random_pair(rng, 3, 0.35, 3);
    const Eigen::Index n = 5;
    std::normal_distribution<double> normal;
    Eigen::VectorXd x(2 * n * 3);
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = normal(rng);
    Eigen::VectorXd grad;
    detail::povm_objective(e, n, x, grad);
    const auto f = [&](const Eigen::VectorXd& y) {
        Eigen::VectorXd g;
        return detail::povm_objective(e, n, y, g);
    };
    const Eigen::VectorXd numeric = testing::numeric_gradient(f, x);
    CHECK((grad - numeric).norm() <= 1e-6 * std::max(1.0, numeric.norm()));
    CHECK(detail::unpack_vectors(detail::pack_vectors(detail::unpack_vectors(x, 3, n)), 3, n)
              .isApprox(detail::unpack_vectors(x, 3, n)));
}

TEST_CASE("optimizer reaches known optima") {
    VectorXc a(2), b(2);
    a << 1.0, 0.0;
    b << 0.0, 1.0;
    const Ensemble orth({0.3, 0.7}, {State::pure(a), State::pure(b)});
    CHECK(optimize_povm(orth).value == doctest::Approx(h2(0.3)).epsilon(1e-6));

    Rng rng = stream_rng(31, 0);
    const State s = random_mixed_state(2, 2, rng);
    const Ensemble same({0.5, 0.5}, {s, s});
    CHECK(optimize_povm(same).value <= 1e-8);

    // Equiprobable pure pair: I_acc = 1 - h((1 + sqrt(1 - c^2)) / 2), c = |<a|b>|.
    for (double theta : {0.2, 0.7, 1.2}) {
        VectorXc u(2), v(2);
        u << std::cos(theta / 2.0), std::sin(theta / 2.0);
        v << std::cos(theta / 2.0), -std::sin(theta / 2.0);
        const double c = std::abs(u.dot(v));
        const Ensemble e({0.5, 0.5}, {State::pure(u), State::pure(v)});
        const double oracle = 1.0 - h2((1.0 + std::sqrt(1.0 - c * c)) / 2.0);
        const double got = optimize_povm(e).value;
        CHECK(got == doctest::Approx(oracle).epsilon(1e-6));
    }
}

TEST_CASE("structured POVMs") {
    Rng rng = stream_rng(32, 0);
    for (int k = 0; k < 10; ++k) {
        const State a = random_mixed_state(3, 1 + k % 3, rng);
        const State b = random_mixed_state(3, 3, rng);
        const PovmX fc = fuchs_caves_povm(a, b);
        CHECK(classical_bhattacharyya(a, b, fc) == doctest::Approx(fidelity(a, b)).epsilon(1e-8));
    }
    const Ensemble e = random_pair(rng, 3, 0.4, 2);
    const PovmX pg = pretty_good_povm(e);
    CHECK(pg.dim() == 3);
    const PovmX rebuilt = povm_from_vectors(rank_one_vectors(pg));
    MatrixXc total = MatrixXc::Zero(3, 3);
    for (const auto& m : rebuilt.elements()) total += m;
    CHECK((total - MatrixXc::Identity(3, 3)).norm() < 1e-10);
}

TEST_CASE("Holevo bound and Jain bound on random ensembles") {
    Rng rng = stream_rng(33, 0);
    PovmSearchConfig cfg;
    cfg.restarts = 4;
    for (int k = 0; k < 20; ++k) {
        std::uniform_real_distribution<double> unif(0.05, 0.95);
        const double p = unif(rng);
        const Ensemble e = random_pair(rng, 2, p, 1 + k % 2);
        const auto res = optimize_povm(e, cfg);
        CHECK(res.value <= holevo_chi(e) + 1e-9);
        CHECK(res.value >= jain_bound(p, fidelity(e.state(0), e.state(1))) - 1e-6);
        CHECK(res.value >= mutual_info_classical(e, env_eigenbasis_povm(e)) - 1e-9);
        CHECK(res.value == doctest::Approx(mutual_info_classical(e, res.povm)).epsilon(1e-12));
    }
}

TEST_CASE("POVM search is deterministic and independent of parallelism") {
    Rng rng = stream_rng(34, 0);
    const Ensemble e = random_pair(rng, 3, 0.6, 2);
    PovmSearchConfig one;
    one.seed = 9;
    one.restarts = 6;
    PovmSearchConfig three = one;
    three.parallelism = 3;
    const auto a = optimize_povm(e, one);
    const auto b = optimize_povm(e, one);
    const auto c = optimize_povm(e, three);
    CHECK(a.value == b.value);
    CHECK(a.value == c.value);
    CHECK(a.origin == c.origin);
    PovmSearchConfig bad;
    bad.restarts = -1;
    CHECK_THROWS_AS(optimize_povm(e, bad), std::invalid_argument);
}

#include <doctest.h>

#include <cmath>

#include "dephent/spin_boson.hpp"
#include "oracles.hpp"

using namespace dephent;
using dephent::testing::h2;
using dephent::testing::panel_simpson;

namespace {

SpinBosonParams params(double s, double temperature, double alpha = 0.0, bool best_effort = false) {
    SpinBosonParams p;
    p.s = s;
    p.cutoff = 1.0;
    p.temperature = temperature;
    p.alpha = alpha;
    p.best_effort_s = best_effort;
    return p;
}

// -2 int J(w) (1 - cos wt) / w^2 dw
double vacuum_quadrature(double t, const SpinBosonParams& p) {
    const auto f = [&](double w) { return w == 0.0 ? 0.0 : ohmic_density(w, p) * (1.0 - std::cos(w * t)) / (w * w); };
    return -2.0 * panel_simpson(f, 0.0, 80.0, 800, 1e-12);
}

// 2 int J(w) (1 - cos wt) / w^2 (tanh(w / 2T) - 1) dw, the thermal factor as implemented.
double thermal_quadrature(double t, const SpinBosonParams& p) {
    const auto f = [&](double w) {
        if (w == 0.0) return 0.0;
        return ohmic_density(w, p) * (1.0 - std::cos(w * t)) / (w * w) * (std::tanh(w / (2.0 * p.temperature)) - 1.0);
    };
    return 2.0 * panel_simpson(f, 0.0, 80.0, 800, 1e-12);
}

}  // namespace

TEST_CASE("Ohmic spectral density") {
    const auto p = params(2, 1);
    CHECK(ohmic_density(1.0, p) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(ohmic_density(0.0, p) == 0.0);
    for (double s : {2.0, 3.0}) {
        const auto q = params(s, 1);
        CHECK(ohmic_density(s, q) > ohmic_density(s - 1e-3, q));
        CHECK(ohmic_density(s, q) > ohmic_density(s + 1e-3, q));
    }
    CHECK_THROWS_AS(ohmic_density(-1.0, p), std::invalid_argument);
}

TEST_CASE("vacuum factor") {
    const auto p2 = params(2, 0);
    for (double x : {0.0, 0.3, 1.0, 2.0, 7.5}) {
        CHECK(0.5 * ln_b_vacuum(x, p2) == doctest::Approx(-(1.0 - 1.0 / (1.0 + x * x))).epsilon(1e-13));
    }
    CHECK(0.5 * ln_b_vacuum(1e6, p2) == doctest::Approx(-1.0).epsilon(1e-10));
    const auto p3 = params(3, 0);
    for (double t : {0.5, 2.0, 4.0}) {
        CHECK(ln_b_vacuum(t, p3) == doctest::Approx(vacuum_quadrature(t, p3)).epsilon(1e-8));
        CHECK(ln_b_vacuum(t, p2) == doctest::Approx(vacuum_quadrature(t, p2)).epsilon(1e-8));
    }
}

TEST_CASE("thermal factor matches its integral representation") {
    for (double s : {2.0, 3.0}) {
        for (double temp : {0.5, 1.0, 2.0}) {
            const auto p = params(s, temp);
            CHECK(ln_b_thermal(0.0, p) == doctest::Approx(0.0).epsilon(1e-12));
            for (double t : {0.5, 2.0, 5.0}) {
                INFO("s=", s, " T=", temp, " t=", t);
                CHECK(ln_b_thermal(t, p) == doctest::Approx(thermal_quadrature(t, p)).epsilon(1e-7));
                CHECK(ln_b_thermal(t, p) <= 0.0);
            }
        }
        CHECK(ln_b_thermal(3.0, params(s, 0.0)) == 0.0);
    }
}

TEST_CASE("best-effort Ohmicity") {
    CHECK_THROWS_AS(params(2.5, 1).validate(), std::invalid_argument);
    const auto p = params(2.5, 1.0, 0.0, true);
    for (double t : {0.5, 2.0}) {
        CHECK(ln_b_thermal(t, p) == doctest::Approx(thermal_quadrature(t, p)).epsilon(1e-7));
        CHECK(ln_b_vacuum(t, p) == doctest::Approx(vacuum_quadrature(t, p)).epsilon(1e-8));
    }
    const auto near = params(3.0 - 1e-7, 1.0, 0.0, true);
    CHECK(ln_b_thermal(2.0, near) == doctest::Approx(ln_b_thermal(2.0, params(3, 1))).epsilon(1e-5));
}

TEST_CASE("analytic fidelity") {
    const auto p = params(2, 1);
    CHECK(analytic_fidelity(0.0, p) == 1.0);
    double prev = 1.0;
    for (double lt : uniform_grid(10.0, 0.05)) {
        const double b = analytic_fidelity(lt, p);
        CHECK(b <= prev + 1e-12);
        prev = b;
    }
}

TEST_CASE("bound curves") {
    auto p = params(2, 1, 1.0);
    p.times = uniform_grid(10.0, 0.05);
    for (const auto& c : bound_curve(p)) CHECK(c.clamped == 0.0);

    for (double a : {0.0, 0.25, 0.5}) {
        auto q = params(3, 1, a);
        q.times = uniform_grid(10.0, 0.05);
        const auto curve = bound_curve(q);
        CHECK(curve.front().raw == doctest::Approx(-h2(a / 2.0)).epsilon(1e-12));
        CHECK(curve.front().clamped == 0.0);
        for (const auto& c : curve) {
            CHECK(c.raw == doctest::Approx(1.0 - h2(a / 2.0) - c.b).epsilon(1e-14));
            CHECK(c.clamped == std::max(0.0, c.raw));
        }
    }

    auto late = params(2, 0, 0.0);
    late.times = {1e6};
    const auto tail = bound_curve(late);
    CHECK(tail.back().raw == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-9));
}

TEST_CASE("peak detection") {
    const std::vector<double> grid = uniform_grid(10.0, 0.05);
    CHECK_FALSE(detect_peak(grid, std::vector<double>(grid.size(), 0.3)).has_value());

    std::vector<double> bump;
    for (double x : grid) bump.push_back(std::exp(-(x - 4.0) * (x - 4.0)));
    const auto pk = detect_peak(grid, bump);
    REQUIRE(pk.has_value());
    CHECK(pk->lambda_t == doctest::Approx(4.0));

    auto s2 = params(2, 1);
    s2.times = grid;
    CHECK_FALSE(detect_peak(bound_curve(s2)).has_value());
    auto s3 = params(3, 1);
    s3.times = grid;
    const auto peak = detect_peak(bound_curve(s3));
    REQUIRE(peak.has_value());
    CHECK(peak->lambda_t >= 1.5);
    CHECK(peak->lambda_t <= 2.5);
}

TEST_CASE("discrete bath sampling") {
    const auto p = params(3, 1);
    const DiscreteBath one = sample_bath(p, 1, 10.0);
    REQUIRE(one.frequencies.size() == 1);
    CHECK(one.frequencies[0] == doctest::Approx(5.0));

    const DiscreteBath bath = sample_bath(p, 400, 10.0);
    CHECK(bath.couplings.front() >= 0.0);
    CHECK(bath.couplings.front() < bath.couplings[50]);

    // sum_k g_k^2 / w_k -> (1/2) int J(w) / w dw = Gamma(s) Lambda / 2
    for (double s : {2.0, 3.0}) {
        const DiscreteBath fine = sample_bath(params(s, 1), 4000, 60.0);
        double reorg = 0.0;
        for (std::size_t k = 0; k < fine.frequencies.size(); ++k) {
            reorg += fine.couplings[k] * fine.couplings[k] / fine.frequencies[k];
        }
        CHECK(reorg == doctest::Approx(std::tgamma(s) / 2.0).epsilon(1e-4));
    }
}

TEST_CASE("discrete-mode oracle") {
    const auto p = params(3, 1);
    const DiscreteBath bath = sample_bath(p, 50, 10.0);
    CHECK(oracle_fidelity(bath, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    DiscreteBath silent = bath;
    std::fill(silent.couplings.begin(), silent.couplings.end(), 0.0);
    CHECK(oracle_fidelity(silent, 2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));

    // vacuum: a coherent-state overlap per mode, exp(-4 sum g^2 (1 - cos wt) / w^2)
    const DiscreteBath vac = sample_bath(params(3, 0), 200, 10.0);
    for (double t : {0.5, 2.0, 4.0}) {
        double ln_b = 0.0;
        for (std::size_t k = 0; k < vac.frequencies.size(); ++k) {
            const double w = vac.frequencies[k];
            ln_b -= 4.0 * vac.couplings[k] * vac.couplings[k] * (1.0 - std::cos(w * t)) / (w * w);
        }
        CHECK(oracle_fidelity(vac, t, 0.0) == doctest::Approx(std::exp(ln_b)).epsilon(1e-9));
    }

    const auto populations = thermal_populations(1.0, 1.0, 30);
    CHECK(populations.sum() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(populations[1] / populations[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

    DiscreteBath tight = sample_bath(p, 20, 10.0, 0.0, 8);
    CHECK_THROWS_AS(oracle_fidelity(tight, 1.0, 1.0), std::runtime_error);
}

TEST_CASE("oracle at T > 0 tracks the thermal factor with reversed sign") {
    // Diagnostic: the displaced-thermal-state fidelity equals exp(ln B_vac - ln B_th),
    // so the analytic product exp(ln B_vac + ln B_th) departs from it at T > 0.
    auto p = params(3, 1);
    const DiscreteBath bath = sample_bath(p, 500, 10.0, 0.1);
    const std::vector<double> times = {0.5, 1.0, 2.0, 3.0, 5.0};
    const auto oracle = oracle_fidelity_curve(bath, times, p.temperature);
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double flipped = std::exp(ln_b_vacuum(times[k], p) - ln_b_thermal(times[k], p));
        CHECK(oracle[k] == doctest::Approx(flipped).epsilon(1e-2));
    }
    CHECK(std::abs(oracle.back() - analytic_fidelity(5.0, p)) / analytic_fidelity(5.0, p) > 1e-2);
}

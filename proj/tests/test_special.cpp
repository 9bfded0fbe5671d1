#include <doctest.h>

#include <numbers>
#include <random>

#include "dephent/special_functions.hpp"

using namespace dephent;
using C = std::complex<double>;

namespace {

// (-1)^{m+1} m! sum_k (z + k)^{-(m+1)} with an Euler-Maclaurin tail, m >= 1.
C polygamma_series(int m, C z) {
    constexpr int kTerms = 20000;
    C sum(0.0);
    for (int k = kTerms - 1; k >= 0; --k) sum += std::pow(z + double(k), -(m + 1));
    const C w = z + double(kTerms);
    sum += std::pow(w, -m) / double(m) + 0.5 * std::pow(w, -(m + 1)) + double(m + 1) / 12.0 * std::pow(w, -(m + 2));
    const double sign = (m % 2 == 1) ? 1.0 : -1.0;
    return sign * std::tgamma(m + 1.0) * sum;
}

}  // namespace

TEST_CASE("polygamma special values") {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    CHECK(polygamma(1, 1.0) == doctest::Approx(pi2 / 6.0).epsilon(1e-13));
    CHECK(polygamma(1, 0.5) == doctest::Approx(pi2 / 2.0).epsilon(1e-13));
    CHECK(polygamma(0, 1.0) == doctest::Approx(-std::numbers::egamma).epsilon(1e-13));
    CHECK(polygamma(0, 0.5) == doctest::Approx(-std::numbers::egamma - 2.0 * std::log(2.0)).epsilon(1e-13));
    // psi''(1) = -2 zeta(3)
    CHECK(polygamma(2, 1.0) == doctest::Approx(-2.0 * 1.2020569031595942).epsilon(1e-13));
    CHECK(hurwitz_zeta(2.0, C(1.0, 0.0)).real() == doctest::Approx(pi2 / 6.0).epsilon(1e-13));
}

TEST_CASE("polygamma agrees with direct series at complex points") {
    for (int m = 1; m <= 3; ++m) {
        for (C z : {C(0.7, 0.3), C(0.5, 2.0), C(1.5, -4.0), C(3.0, 10.0)}) {
            const C a = polygamma(m, z);
            const C b = polygamma_series(m, z);
            CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(b)));
        }
    }
}

TEST_CASE("polygamma recurrence") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> re(0.05, 5.0);
    std::uniform_real_distribution<double> im(-20.0, 20.0);
    for (int n = 0; n < 100; ++n) {
        const C z(re(rng), im(rng));
        for (int m = 0; m <= 2; ++m) {
            // Psi^m(z + 1) = Psi^m(z) + (-1)^m m! / z^{m+1}
            const double sign = (m % 2 == 0) ? 1.0 : -1.0;
            const C lhs = polygamma(m, z + 1.0);
            const C rhs = polygamma(m, z) + sign * std::tgamma(m + 1.0) / std::pow(z, m + 1);
            CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
        }
    }
}

TEST_CASE("special function domain errors") {
    CHECK_THROWS_AS(polygamma(1, C(-0.5, 1.0)), std::domain_error);
    CHECK_THROWS_AS(polygamma(-1, C(1.0, 0.0)), std::domain_error);
    CHECK_THROWS_AS(hurwitz_zeta(1.0, C(1.0, 0.0)), std::domain_error);
}

// special_functions.hpp: Hurwitz zeta, digamma and polygamma for complex arguments
//
// Psi^m(z) = sum_k (-1)^{m+1} m! / (z + k)^{m+1}, Re z > 0. For m >= 1 the series
// is summed directly up to a shift and the tail is closed with Euler-Maclaurin,
// which is the Hurwitz zeta route: Psi^m(z) = (-1)^{m+1} m! zeta(m + 1, z).
// The m = 0 series diverges, so digamma uses the recurrence plus the
// asymptotic Stirling-type expansion.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace dephent {

namespace detail {

// B_2, B_4, ..., B_30
inline constexpr std::array<double, 15> kBernoulliEven = {
    1.0 / 6.0,           -1.0 / 30.0,          1.0 / 42.0,        -1.0 / 30.0,
    5.0 / 66.0,          -691.0 / 2730.0,      7.0 / 6.0,         -3617.0 / 510.0,
    43867.0 / 798.0,     -174611.0 / 330.0,    854513.0 / 138.0,  -236364091.0 / 2730.0,
    7709321041.0 / 798.0, -8553103.0 / 6.0,    23749461029.0 / 870.0};

inline constexpr double kZetaShift = 15.0;
inline constexpr double kDigammaShift = 10.0;

}  // namespace detail

// zeta(s, z) = sum_{k>=0} (z + k)^{-s} for real order s != 1 and Re z > 0.
template <typename Scalar>
std::complex<Scalar> hurwitz_zeta(Scalar s, std::complex<Scalar> z) {
    if (!(z.real() > Scalar(0))) throw std::domain_error("hurwitz_zeta: requires Re z > 0");
    if (s == Scalar(1)) throw std::domain_error("hurwitz_zeta: pole at order 1");
    using C = std::complex<Scalar>;
    C head(0);
    int shift = 0;
    if (z.real() < Scalar(detail::kZetaShift)) shift = static_cast<int>(std::ceil(detail::kZetaShift - z.real()));
    for (int k = 0; k < shift; ++k) head += std::pow(z + Scalar(k), -s);
    const C w = z + Scalar(shift);
    C tail = std::pow(w, Scalar(1) - s) / (s - Scalar(1)) + std::pow(w, -s) / Scalar(2);
    // sum_j B_2j / (2j)! * s (s+1) ... (s+2j-2) * w^{-s-2j+1}
    C wpow = std::pow(w, -s - Scalar(1));
    const C winv2 = Scalar(1) / (w * w);
    Scalar rising = s;       // s (s+1) ... (s+2j-2)
    Scalar factorial = 2;    // (2j)!
    for (std::size_t j = 1; j <= detail::kBernoulliEven.size(); ++j) {
        const C term = Scalar(detail::kBernoulliEven[j - 1]) / factorial * rising * wpow;
        tail += term;
        if (std::abs(term) < std::numeric_limits<Scalar>::epsilon() * std::abs(tail)) break;
        rising *= (s + Scalar(2 * j - 1)) * (s + Scalar(2 * j));
        factorial *= Scalar(2 * j + 1) * Scalar(2 * j + 2);
        wpow *= winv2;
    }
    return head + tail;
}

template <typename Scalar>
std::complex<Scalar> digamma(std::complex<Scalar> z) {
    if (!(z.real() > Scalar(0))) throw std::domain_error("digamma: requires Re z > 0");
    using C = std::complex<Scalar>;
    C acc(0);
    while (z.real() <= Scalar(detail::kDigammaShift)) {
        acc -= Scalar(1) / z;
        z += Scalar(1);
    }
    const C winv2 = Scalar(1) / (z * z);
    C series(0);
    C wpow = winv2;
    for (std::size_t k = 1; k <= detail::kBernoulliEven.size(); ++k) {
        const C term = Scalar(detail::kBernoulliEven[k - 1]) / Scalar(2 * k) * wpow;
        series += term;
        if (std::abs(term) < std::numeric_limits<Scalar>::epsilon()) break;
        wpow *= winv2;
    }
    return acc + std::log(z) - Scalar(1) / (Scalar(2) * z) - series;
}

template <typename Scalar>
std::complex<Scalar> polygamma(int m, std::complex<Scalar> z) {
    if (m < 0) throw std::domain_error("polygamma: order must be nonnegative");
    if (!(z.real() > Scalar(0))) throw std::domain_error("polygamma: requires Re z > 0");
    if (m == 0) return digamma(z);
    const Scalar sign = (m % 2 == 1) ? Scalar(1) : Scalar(-1);  // (-1)^{m+1}
    return sign * std::tgamma(Scalar(m + 1)) * hurwitz_zeta(Scalar(m + 1), z);
}

template <typename Scalar>
Scalar polygamma(int m, Scalar x) {
    return polygamma(m, std::complex<Scalar>(x, Scalar(0))).real();
}

}  // namespace dephent

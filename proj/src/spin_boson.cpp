#include "dephent/spin_boson.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dephent/special_functions.hpp"

namespace dephent {

namespace {

using Complex = std::complex<double>;

constexpr double kThermalTail = 1e-8;
constexpr double kMarginFloor = 8.0;
constexpr double kPeakProminence = 1e-9;
constexpr double kSanity = 1e-10;

bool is_guaranteed_s(double s) { return s == 2.0 || s == 3.0; }

// {Psi^m(1 + h) - Psi^m(1/2 + h) + Re[Psi^m(1/2 + h + iy) - Psi^m(1 + h + iy)]}
double polygamma_bracket(int m, double h, double y) {
    const Complex one(1.0 + h, 0.0);
    const Complex half(0.5 + h, 0.0);
    const Complex shift(0.0, y);
    return (polygamma(m, one) - polygamma(m, half) + polygamma(m, half + shift) - polygamma(m, one + shift)).real();
}

// Same bracket with zeta(order, .) in place of Psi^m, for the non-integer continuation.
double zeta_bracket(double order, double h, double y) {
    const Complex one(1.0 + h, 0.0);
    const Complex half(0.5 + h, 0.0);
    const Complex shift(0.0, y);
    return (hurwitz_zeta(order, one) - hurwitz_zeta(order, half) + hurwitz_zeta(order, half + shift) -
            hurwitz_zeta(order, one + shift))
        .real();
}

}  // namespace

void SpinBosonParams::validate() const {
    if (!(s > 1.0)) throw std::invalid_argument("SpinBosonParams: Ohmicity s must exceed 1");
    if (!best_effort_s && !is_guaranteed_s(s)) {
        throw std::invalid_argument("SpinBosonParams: s = " + std::to_string(s) +
                                    " is only supported with the best-effort flag (guaranteed: 2, 3)");
    }
    if (!(cutoff > 0.0)) throw std::invalid_argument("SpinBosonParams: cutoff must be positive");
    if (!(temperature >= 0.0)) throw std::invalid_argument("SpinBosonParams: temperature must be nonnegative");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("SpinBosonParams: alpha outside [0, 1]");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0.0)) throw std::invalid_argument("SpinBosonParams: times must be nonnegative");
        if (i > 0 && !(times[i] > times[i - 1])) throw std::invalid_argument("SpinBosonParams: times must ascend");
    }
}

double ohmic_density(double omega, const SpinBosonParams& p) {
    if (!(omega >= 0.0)) throw std::invalid_argument("ohmic_density: frequency must be nonnegative");
    if (omega == 0.0) return 0.0;
    return std::pow(omega, p.s) / std::pow(p.cutoff, p.s - 1.0) * std::exp(-omega / p.cutoff);
}

double ln_b_vacuum(double t, const SpinBosonParams& p) {
    if (!(p.s > 1.0)) throw std::invalid_argument("ln_b_vacuum: Ohmicity s must exceed 1");
    if (!(t >= 0.0)) throw std::invalid_argument("ln_b_vacuum: time must be nonnegative");
    const double x = p.cutoff * t;
    const double sm1 = p.s - 1.0;
    const double ratio = std::cos(sm1 * std::atan(x)) / std::pow(1.0 + x * x, sm1 / 2.0);
    return -2.0 * std::tgamma(sm1) * (1.0 - ratio);
}

double ln_b_thermal(double t, const SpinBosonParams& p) {
    p.validate();
    if (!(t >= 0.0)) throw std::invalid_argument("ln_b_thermal: time must be nonnegative");
    if (p.temperature == 0.0) return 0.0;
    const double h = p.temperature / (2.0 * p.cutoff);
    const double y = p.temperature * t / 2.0;
    double value;
    if (std::abs(p.s - std::round(p.s)) == 0.0 && p.s >= 2.0) {
        const int m = static_cast<int>(std::round(p.s)) - 2;
        value = 4.0 * std::pow(-h, m + 1) * polygamma_bracket(m, h, y);
    } else {
        // (-h)^{s-1} (-1)^{s-1} Gamma(s-1) zeta(s-1, .) with the two sign factors
        // combined to +1, which reproduces the integer cases exactly.
        value = 4.0 * std::pow(h, p.s - 1.0) * std::tgamma(p.s - 1.0) * zeta_bracket(p.s - 1.0, h, y);
    }
    if (t > 0.0 && value > kSanity) {
        throw std::domain_error("ln_b_thermal: positive value " + std::to_string(value) + " at t = " +
                                std::to_string(t));
    }
    return value;
}

double analytic_fidelity(double t, const SpinBosonParams& p) {
    const double ln_b = ln_b_vacuum(t, p) + ln_b_thermal(t, p);
    if (ln_b > kSanity) throw std::domain_error("analytic_fidelity: B exceeds 1 at t = " + std::to_string(t));
    return std::exp(std::min(ln_b, 0.0));
}

std::vector<double> uniform_grid(double stop, double step) {
    if (!(step > 0.0) || !(stop >= 0.0)) throw std::invalid_argument("uniform_grid: need step > 0, stop >= 0");
    const auto n = static_cast<long>(std::floor(stop / step + 1e-9));
    std::vector<double> grid;
    for (long k = 0; k <= n; ++k) grid.push_back(static_cast<double>(k) * step);
    return grid;
}

std::vector<CurvePoint> bound_curve(const SpinBosonParams& p) {
    p.validate();
    const double coherence = 1.0 - binary_entropy(p.alpha / 2.0);
    std::vector<CurvePoint> curve;
    curve.reserve(p.times.size());
    for (double lambda_t : p.times) {
        const double t = lambda_t / p.cutoff;
        CurvePoint c{};
        c.lambda_t = lambda_t;
        c.ln_b_vac = ln_b_vacuum(t, p);
        c.ln_b_th = ln_b_thermal(t, p);
        c.b = analytic_fidelity(t, p);
        // 2 sqrt(p(1-p)) = 1 for the p = 1/2 family
        c.raw = coherence - c.b;
        c.clamped = std::max(0.0, c.raw);
        curve.push_back(c);
    }
    return curve;
}

std::optional<Peak> detect_peak(const std::vector<double>& grid, const std::vector<double>& values) {
    if (grid.size() != values.size()) throw std::invalid_argument("detect_peak: grid and values differ in size");
    const std::size_t n = values.size();
    std::optional<Peak> best;
    std::size_t i = 1;
    while (i + 1 < n) {
        if (!(values[i] > values[i - 1])) {
            ++i;
            continue;
        }
        std::size_t j = i;  // end of a plateau starting at i
        while (j + 1 < n && values[j + 1] == values[i]) ++j;
        if (j + 1 >= n || !(values[j + 1] < values[i])) {
            i = j + 1;
            continue;
        }
        const double top = values[i];
        double left_min = top;
        for (std::size_t k = i; k-- > 0;) {
            if (values[k] > top) break;
            left_min = std::min(left_min, values[k]);
        }
        double right_min = top;
        for (std::size_t k = j + 1; k < n; ++k) {
            if (values[k] > top) break;
            right_min = std::min(right_min, values[k]);
        }
        const double prominence = top - std::max(left_min, right_min);
        if (prominence > kPeakProminence && (!best || prominence > best->prominence)) {
            best = Peak{grid[i], prominence};
        }
        i = j + 1;
    }
    return best;
}

std::optional<Peak> detect_peak(const std::vector<CurvePoint>& curve) {
    std::vector<double> grid;
    std::vector<double> values;
    for (const auto& c : curve) {
        grid.push_back(c.lambda_t);
        values.push_back(c.clamped);
    }
    return detect_peak(grid, values);
}

DiscreteBath sample_bath(const SpinBosonParams& p, int n_modes, double omega_max, double omega_min, int fock_cutoff) {
    if (n_modes < 1) throw std::invalid_argument("sample_bath: need at least one mode");
    if (!(omega_min >= 0.0 && omega_max > omega_min)) {
        throw std::invalid_argument("sample_bath: need 0 <= omega_min < omega_max");
    }
    if (fock_cutoff < 2) throw std::invalid_argument("sample_bath: Fock cutoff must be at least 2");
    DiscreteBath bath;
    bath.fock_cutoff = fock_cutoff;
    const double dw = (omega_max - omega_min) / n_modes;
    for (int k = 0; k < n_modes; ++k) {
        const double w = omega_min + (k + 0.5) * dw;
        bath.frequencies.push_back(w);
        bath.couplings.push_back(std::sqrt(ohmic_density(w, p) * dw / 2.0));
    }
    return bath;
}

ModeTruncation mode_truncation(double omega, double g, double temperature) {
    if (!(omega > 0.0)) throw std::invalid_argument("mode_truncation: frequency must be positive");
    int thermal = 1;
    if (temperature > 0.0) {
        // smallest n with q^n < 1e-8, q = exp(-omega / T)
        const double n = std::log(kThermalTail) / (-omega / temperature);
        thermal = std::max(1, static_cast<int>(std::floor(n)) + 1);
    }
    const double displacement = 2.0 * std::abs(g) / omega;
    const int margin =
        static_cast<int>(std::ceil(4.0 * displacement * (1.0 + std::sqrt(static_cast<double>(thermal))) + kMarginFloor));
    return {thermal, thermal + margin};
}

Eigen::VectorXd thermal_populations(double omega, double temperature, int levels) {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(levels);
    if (temperature == 0.0) {
        p[0] = 1.0;
        return p;
    }
    const double q = std::exp(-omega / temperature);
    double w = 1.0;
    for (int n = 0; n < levels; ++n, w *= q) p[n] = w;
    return p / p.sum();
}

std::vector<double> oracle_fidelity_curve(const DiscreteBath& bath, const std::vector<double>& times,
                                          double temperature) {
    if (bath.frequencies.size() != bath.couplings.size()) {
        throw std::invalid_argument("oracle_fidelity: frequencies and couplings differ in length");
    }
    if (!(temperature >= 0.0)) throw std::invalid_argument("oracle_fidelity: temperature must be nonnegative");
    std::vector<double> ln_b(times.size(), 0.0);
    for (std::size_t k = 0; k < bath.frequencies.size(); ++k) {
        const double w = bath.frequencies[k];
        const double g = bath.couplings[k];
        const ModeTruncation tr = mode_truncation(w, g, temperature);
        if (tr.total_levels > bath.fock_cutoff) {
            throw std::runtime_error("oracle_fidelity: mode " + std::to_string(k) + " (omega = " + std::to_string(w) +
                                     ") needs " + std::to_string(tr.total_levels) +
                                     " Fock levels, above the cutoff " + std::to_string(bath.fock_cutoff) +
                                     "; thermal tail would exceed 1e-8");
        }
        const int big = tr.total_levels;
        const int small = tr.thermal_levels;
        Eigen::MatrixXd h_plus = Eigen::MatrixXd::Zero(big, big);
        for (int n = 0; n < big; ++n) h_plus(n, n) = w * n;
        Eigen::MatrixXd h_minus = h_plus;
        for (int n = 0; n + 1 < big; ++n) {
            const double x = g * std::sqrt(static_cast<double>(n + 1));
            h_plus(n, n + 1) = h_plus(n + 1, n) = x;
            h_minus(n, n + 1) = h_minus(n + 1, n) = -x;
        }
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> plus(h_plus);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> minus(h_minus);
        const MatrixXc overlap = (plus.eigenvectors().transpose() * minus.eigenvectors()).cast<Complex>();
        const Eigen::MatrixXd top_plus = plus.eigenvectors().topRows(small);
        const Eigen::MatrixXd top_minus = minus.eigenvectors().topRows(small);
        const Eigen::VectorXd root_p = thermal_populations(w, temperature, small).cwiseSqrt();

        for (std::size_t ti = 0; ti < times.size(); ++ti) {
            const double t = times[ti];
            VectorXc phase_plus(big);
            VectorXc phase_minus(big);
            for (int n = 0; n < big; ++n) {
                phase_plus[n] = std::polar(1.0, plus.eigenvalues()[n] * t);
                phase_minus[n] = std::polar(1.0, -minus.eigenvalues()[n] * t);
            }
            // rows of U_+^dagger U_- restricted to the thermal levels
            const MatrixXc left = top_plus.cast<Complex>() * phase_plus.asDiagonal();
            const MatrixXc mid = (left * overlap) * phase_minus.asDiagonal();
            const MatrixXc w_small = mid * top_minus.transpose().cast<Complex>();
            const MatrixXc m = root_p.asDiagonal() * w_small * root_p.asDiagonal();
            const double b = small == 1 ? std::abs(m(0, 0)) : nuclear_norm(m);
            ln_b[ti] += b > 0.0 ? std::log(std::min(b, 1.0)) : -std::numeric_limits<double>::infinity();
        }
    }
    std::vector<double> out;
    out.reserve(times.size());
    for (double v : ln_b) out.push_back(std::exp(v));
    return out;
}

double oracle_fidelity(const DiscreteBath& bath, double t, double temperature) {
    return oracle_fidelity_curve(bath, {t}, temperature).front();
}

DephasingModel single_mode_model(double omega, double g, int levels) {
    if (levels < 2) throw std::invalid_argument("single_mode_model: need at least two levels");
    MatrixXc h = MatrixXc::Zero(levels, levels);
    MatrixXc x = MatrixXc::Zero(levels, levels);
    for (int n = 0; n < levels; ++n) h(n, n) = omega * n;
    for (int n = 0; n + 1 < levels; ++n) x(n, n + 1) = x(n + 1, n) = std::sqrt(static_cast<double>(n + 1));
    return DephasingModel({0.0, 0.0}, h, {g * x, -g * x});
}

State truncated_thermal_state(double omega, double temperature, const ModeTruncation& truncation) {
    const Eigen::VectorXd p = thermal_populations(omega, temperature, truncation.thermal_levels);
    MatrixXc m = MatrixXc::Zero(truncation.total_levels, truncation.total_levels);
    for (int n = 0; n < truncation.thermal_levels; ++n) m(n, n) = p[n];
    return State(std::move(m));
}

}  // namespace dephent

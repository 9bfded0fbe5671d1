// spin_boson.hpp: Ohmic spin-boson case study
//
// H = sum_k w_k a_k^dagger a_k + sigma_z (x) sum_k g_k (a_k^dagger + a_k) with
// J(w) = w^s / Lambda^{s-1} exp(-w / Lambda). Times are physical unless a
// name says Lambda_t; the curve grids are in cutoff units Lambda t.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dephent/dynamics.hpp"

namespace dephent {

struct SpinBosonParams {
    double s = 2.0;
    double cutoff = 1.0;       // Lambda
    double temperature = 1.0;  // T, k_B = 1
    double alpha = 0.0;        // mixedness of the initial qubit state
    std::vector<double> times; // Lambda t grid, ascending
    bool best_effort_s = false;

    // Throws std::invalid_argument; s outside {2, 3} needs best_effort_s.
    void validate() const;
    double t_over_lambda() const { return temperature / cutoff; }
};

double ohmic_density(double omega, const SpinBosonParams& p);

// ln B_vac(t) = -2 Gamma(s-1) [1 - cos((s-1) atan(Lambda t)) / (1 + Lambda^2 t^2)^{(s-1)/2}]
double ln_b_vacuum(double t, const SpinBosonParams& p);

// ln B_th(t) = 4 (-T/2Lambda)^{s-1} {Psi^{s-2}(1 + T/2Lambda) - Psi^{s-2}(1/2 + T/2Lambda)
//              + Re[Psi^{s-2}(1/2 + T/2Lambda + i T t/2) - Psi^{s-2}(1 + T/2Lambda + i T t/2)]}
double ln_b_thermal(double t, const SpinBosonParams& p);

// exp(ln B_vac + ln B_th); throws std::domain_error if the result exceeds 1.
double analytic_fidelity(double t, const SpinBosonParams& p);

struct CurvePoint {
    double lambda_t;
    double ln_b_vac;
    double ln_b_th;
    double b;
    double raw;      // 1 - h(alpha/2) - B
    double clamped;  // max{0, raw}
};

std::vector<CurvePoint> bound_curve(const SpinBosonParams& p);

// Uniform grid 0, step, ..., stop (inclusive up to rounding).
std::vector<double> uniform_grid(double stop, double step);

struct Peak {
    double lambda_t;
    double prominence;
};

// Interior local maximum of `values` with the largest prominence above 1e-9.
std::optional<Peak> detect_peak(const std::vector<double>& grid, const std::vector<double>& values);
std::optional<Peak> detect_peak(const std::vector<CurvePoint>& curve);

struct DiscreteBath {
    std::vector<double> frequencies;
    std::vector<double> couplings;
    int fock_cutoff = 256;  // largest per-mode truncation allowed
};

// Midpoint grid of n_modes frequencies on [omega_min, omega_max] with
// g_k = sqrt(J(w_k) dw / 2).
DiscreteBath sample_bath(const SpinBosonParams& p, int n_modes, double omega_max, double omega_min = 0.0,
                         int fock_cutoff = 256);

// Truncation used for one mode: thermal levels carrying all but 1e-8 of the
// weight, plus a displacement margin.
struct ModeTruncation {
    int thermal_levels;
    int total_levels;
};

ModeTruncation mode_truncation(double omega, double g, double temperature);

// Thermal populations (1 - q) q^n, n < levels, renormalized; q = exp(-omega / T).
Eigen::VectorXd thermal_populations(double omega, double temperature, int levels);

// prod_k B(rho_0^k(t), rho_1^k(t)) from truncated-Fock numerics. Throws
// std::runtime_error naming the mode when the truncation does not fit.
std::vector<double> oracle_fidelity_curve(const DiscreteBath& bath, const std::vector<double>& times,
                                          double temperature);
double oracle_fidelity(const DiscreteBath& bath, double t, double temperature);

// Single mode as a finite dephasing model: H_E = w a^dagger a, V_0 = -V_1 = g (a + a^dagger),
// truncated to `levels`.
DephasingModel single_mode_model(double omega, double g, int levels);
// Thermal populations on the first thermal_levels of a total_levels space.
State truncated_thermal_state(double omega, double temperature, const ModeTruncation& truncation);

}  // namespace dephent

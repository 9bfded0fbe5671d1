// tolerances.hpp: numerical thresholds shared by every module

#pragma once

namespace dephent::tol {

// DensityMatrix invariants
inline constexpr double kHermitian = 1e-12;
inline constexpr double kTrace = 1e-12;
inline constexpr double kNegativeEigenvalue = 1e-10;

// Inputs that must be Hermitian (Hamiltonians, observables) and derived checks.
inline constexpr double kHermitianInput = 1e-10;
inline constexpr double kOrthonormal = 1e-10;
inline constexpr double kPovm = 1e-10;
inline constexpr double kProbabilitySum = 1e-12;

// Eigenvalues below this are treated as exact zeros before square roots.
inline constexpr double kSpectralZero = 1e-14;

// Relative entropy returns +inf when the second argument has an eigenvalue
// below this on the support of the first.
inline constexpr double kSupport = 1e-12;

// Proof-chain slack.
inline constexpr double kAnalytic = 1e-9;
inline constexpr double kOptimizer = 1e-6;
inline constexpr double kBracketTight = 1e-4;
inline constexpr double kBracketLoose = 1e-3;

}  // namespace dephent::tol

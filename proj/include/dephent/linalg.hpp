// linalg.hpp: dense complex Hermitian algebra for multipartite states
//
// Everything here is templated on the real scalar type and accepts Eigen
// expressions; results are plain matrices so callers can keep composing.
// Subsystem index 0 is the system (left Kronecker factor), index 1 the
// environment.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "dephent/tolerances.hpp"

namespace dephent {

template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXc = ComplexMatrix<double>;
using VectorXc = ComplexVector<double>;
using Dims = std::vector<Eigen::Index>;

inline Eigen::Index dims_product(const Dims& dims) {
    return std::accumulate(dims.begin(), dims.end(), Eigen::Index{1}, std::multiplies<>());
}

// Largest entrywise |A - A^dagger|.
template <typename Derived>
typename Derived::RealScalar hermitian_defect(const Eigen::MatrixBase<Derived>& a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("hermitian_defect: matrix must be square");
    }
    if (a.size() == 0) return 0;
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Scalar>
struct SpectralDecomposition {
    RealVector<Scalar> eigenvalues;       // ascending
    ComplexMatrix<Scalar> eigenvectors;   // orthonormal columns

    ComplexMatrix<Scalar> reconstruct() const {
        return eigenvectors * eigenvalues.template cast<std::complex<Scalar>>().asDiagonal() *
               eigenvectors.adjoint();
    }
};

template <typename Derived>
SpectralDecomposition<typename Derived::RealScalar> herm_eig(
    const Eigen::MatrixBase<Derived>& h, double tolerance = tol::kHermitianInput) {
    using Real = typename Derived::RealScalar;
    using Matrix = ComplexMatrix<Real>;
    if (h.rows() != h.cols()) {
        throw std::invalid_argument("herm_eig: matrix must be square");
    }
    const Real defect = hermitian_defect(h);
    if (defect > tolerance) {
        throw std::invalid_argument("herm_eig: input is not Hermitian (defect " +
                                    std::to_string(static_cast<double>(defect)) + ")");
    }
    Matrix sym = (h + h.adjoint()).template cast<std::complex<Real>>() / Real(2);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("herm_eig: eigendecomposition did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

// Clip bounded negative noise in a PSD spectrum: values in [-1e-10, 0) become 0,
// anything more negative is a genuine PSD violation.
template <typename Scalar>
RealVector<Scalar> clip_spectrum(RealVector<Scalar> values) {
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (values[i] < Scalar(0)) {
            if (values[i] < -Scalar(tol::kNegativeEigenvalue)) {
                throw std::domain_error("clip_spectrum: eigenvalue " +
                                        std::to_string(static_cast<double>(values[i])) +
                                        " violates positive semidefiniteness");
            }
            values[i] = Scalar(0);
        }
    }
    return values;
}

// f applied to the spectrum of a Hermitian matrix. f may return a real or a
// complex value; non-finite results are reported as domain errors.
template <typename Derived, typename F>
ComplexMatrix<typename Derived::RealScalar> mat_func(const Eigen::MatrixBase<Derived>& h, F&& f) {
    using Real = typename Derived::RealScalar;
    const auto eig = herm_eig(h);
    ComplexVector<Real> mapped(eig.eigenvalues.size());
    for (Eigen::Index i = 0; i < mapped.size(); ++i) {
        const std::complex<Real> v(f(eig.eigenvalues[i]));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw std::domain_error("mat_func: function undefined at eigenvalue " +
                                    std::to_string(static_cast<double>(eig.eigenvalues[i])));
        }
        mapped[i] = v;
    }
    return eig.eigenvectors * mapped.asDiagonal() * eig.eigenvectors.adjoint();
}

// Square root of a PSD matrix, with clipped noise and numerical zeros removed.
template <typename Derived>
ComplexMatrix<typename Derived::RealScalar> sqrt_psd(const Eigen::MatrixBase<Derived>& h) {
    using Real = typename Derived::RealScalar;
    auto eig = herm_eig(h);
    RealVector<Real> values = clip_spectrum<Real>(eig.eigenvalues);
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        values[i] = values[i] <= Real(tol::kSpectralZero) ? Real(0) : std::sqrt(values[i]);
    }
    return eig.eigenvectors * values.template cast<std::complex<Real>>().asDiagonal() *
           eig.eigenvectors.adjoint();
}

// exp(-i h t) for Hermitian h.
template <typename Derived>
ComplexMatrix<typename Derived::RealScalar> unitary_exp(const Eigen::MatrixBase<Derived>& h,
                                                        typename Derived::RealScalar t) {
    using Real = typename Derived::RealScalar;
    return mat_func(h, [t](Real e) { return std::polar(Real(1), -e * t); });
}

// Sum of singular values.
template <typename Derived>
typename Derived::RealScalar nuclear_norm(const Eigen::MatrixBase<Derived>& a) {
    using Plain = typename Derived::PlainObject;
    Eigen::BDCSVD<Plain> svd(a.eval());
    return svd.singularValues().sum();
}

template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    using Scalar = std::common_type_t<typename DerivedA::Scalar, typename DerivedB::Scalar>;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = Scalar(a(i, j)) * b.template cast<Scalar>();
        }
    }
    return out;
}

// Trace-one PSD Hermitian operator carrying its tensor-factor layout.
template <typename Scalar>
class DensityMatrix {
public:
    using Matrix = ComplexMatrix<Scalar>;
    using Vector = ComplexVector<Scalar>;

    DensityMatrix() : matrix_(Matrix::Ones(1, 1)), dims_{1} {}

    explicit DensityMatrix(Matrix m, Dims dims = {}) : matrix_(std::move(m)), dims_(std::move(dims)) {
        if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
            throw std::invalid_argument("DensityMatrix: matrix must be square and non-empty");
        }
        if (dims_.empty()) dims_ = {matrix_.rows()};
        if (dims_product(dims_) != matrix_.rows()) {
            throw std::invalid_argument("DensityMatrix: subsystem dimensions do not multiply to dim");
        }
        const Scalar defect = hermitian_defect(matrix_);
        if (defect > Scalar(tol::kHermitian)) {
            throw std::invalid_argument("DensityMatrix: not Hermitian (defect " +
                                        std::to_string(static_cast<double>(defect)) + ")");
        }
        matrix_ = (matrix_ + matrix_.adjoint()).eval() / Scalar(2);
        const Scalar trace = matrix_.trace().real();
        if (std::abs(trace - Scalar(1)) > Scalar(tol::kTrace)) {
            throw std::invalid_argument("DensityMatrix: trace " + std::to_string(static_cast<double>(trace)) +
                                        " is not 1");
        }
        Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_, Eigen::EigenvaluesOnly);
        if (solver.eigenvalues()[0] < -Scalar(tol::kNegativeEigenvalue)) {
            throw std::invalid_argument("DensityMatrix: smallest eigenvalue " +
                                        std::to_string(static_cast<double>(solver.eigenvalues()[0])) +
                                        " is negative");
        }
    }

    static DensityMatrix pure(const Vector& psi, Dims dims = {}) {
        const Vector unit = psi / psi.norm();
        return DensityMatrix(unit * unit.adjoint(), std::move(dims));
    }

    static DensityMatrix maximally_mixed(Eigen::Index dim) {
        return DensityMatrix(Matrix::Identity(dim, dim) / Scalar(dim));
    }

    // Normalizes a PSD matrix by its trace.
    static DensityMatrix from_unnormalized(const Matrix& m, Dims dims = {}) {
        return DensityMatrix(m / m.trace().real(), std::move(dims));
    }

    Eigen::Index dim() const { return matrix_.rows(); }
    const Matrix& matrix() const { return matrix_; }
    const Dims& subsystem_dims() const { return dims_; }
    std::size_t subsystems() const { return dims_.size(); }

    Scalar purity() const { return (matrix_ * matrix_).trace().real(); }

    DensityMatrix with_dims(Dims dims) const { return DensityMatrix(matrix_, std::move(dims)); }

private:
    Matrix matrix_;
    Dims dims_;
};

using State = DensityMatrix<double>;

template <typename DerivedA, typename DerivedB>
auto tensor(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    return kron(a, b);
}

template <typename Scalar>
DensityMatrix<Scalar> tensor(const DensityMatrix<Scalar>& a, const DensityMatrix<Scalar>& b) {
    Dims dims = a.subsystem_dims();
    dims.insert(dims.end(), b.subsystem_dims().begin(), b.subsystem_dims().end());
    return DensityMatrix<Scalar>(kron(a.matrix(), b.matrix()), std::move(dims));
}

namespace detail {

struct Split {
    Eigen::Index left;    // product of dims before the chosen factor
    Eigen::Index middle;  // chosen factor
    Eigen::Index right;   // product of dims after it
};

inline Split split_at(const Dims& dims, std::size_t index, const char* who) {
    if (dims.size() < 2) {
        throw std::invalid_argument(std::string(who) + ": state has a single subsystem");
    }
    if (index >= dims.size()) {
        throw std::out_of_range(std::string(who) + ": subsystem index " + std::to_string(index) +
                                " out of range");
    }
    Split s{1, dims[index], 1};
    for (std::size_t k = 0; k < index; ++k) s.left *= dims[k];
    for (std::size_t k = index + 1; k < dims.size(); ++k) s.right *= dims[k];
    return s;
}

}  // namespace detail

// Reduced state on subsystem `keep`; every other factor is traced out.
template <typename Scalar>
DensityMatrix<Scalar> partial_trace(const DensityMatrix<Scalar>& rho, std::size_t keep) {
    const auto s = detail::split_at(rho.subsystem_dims(), keep, "partial_trace");
    const auto& m = rho.matrix();
    ComplexMatrix<Scalar> out = ComplexMatrix<Scalar>::Zero(s.middle, s.middle);
    for (Eigen::Index a = 0; a < s.middle; ++a) {
        for (Eigen::Index b = 0; b < s.middle; ++b) {
            std::complex<Scalar> acc(0);
            for (Eigen::Index l = 0; l < s.left; ++l) {
                for (Eigen::Index r = 0; r < s.right; ++r) {
                    acc += m((l * s.middle + a) * s.right + r, (l * s.middle + b) * s.right + r);
                }
            }
            out(a, b) = acc;
        }
    }
    return DensityMatrix<Scalar>(std::move(out));
}

// Transpose on one tensor factor only.
template <typename Scalar>
ComplexMatrix<Scalar> partial_transpose(const ComplexMatrix<Scalar>& m, const Dims& dims, std::size_t subsystem) {
    const auto s = detail::split_at(dims, subsystem, "partial_transpose");
    if (dims_product(dims) != m.rows() || m.rows() != m.cols()) {
        throw std::invalid_argument("partial_transpose: dimensions do not match matrix");
    }
    ComplexMatrix<Scalar> out(m.rows(), m.cols());
    for (Eigen::Index l1 = 0; l1 < s.left; ++l1)
        for (Eigen::Index a = 0; a < s.middle; ++a)
            for (Eigen::Index r1 = 0; r1 < s.right; ++r1)
                for (Eigen::Index l2 = 0; l2 < s.left; ++l2)
                    for (Eigen::Index b = 0; b < s.middle; ++b)
                        for (Eigen::Index r2 = 0; r2 < s.right; ++r2) {
                            out((l1 * s.middle + a) * s.right + r1, (l2 * s.middle + b) * s.right + r2) =
                                m((l1 * s.middle + b) * s.right + r1, (l2 * s.middle + a) * s.right + r2);
                        }
    return out;
}

template <typename Scalar>
ComplexMatrix<Scalar> partial_transpose(const DensityMatrix<Scalar>& rho, std::size_t subsystem) {
    return partial_transpose(rho.matrix(), rho.subsystem_dims(), subsystem);
}

// Conjugation U rho U^dagger, keeping the subsystem layout.
template <typename Scalar, typename Derived>
DensityMatrix<Scalar> conjugate(const DensityMatrix<Scalar>& rho, const Eigen::MatrixBase<Derived>& u) {
    return DensityMatrix<Scalar>(u * rho.matrix() * u.adjoint(), rho.subsystem_dims());
}

}  // namespace dephent

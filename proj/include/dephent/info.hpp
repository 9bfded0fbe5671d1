// info.hpp: entropic and distinguishability functionals, all in bits

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dephent/linalg.hpp"

namespace dephent {

// 0 log 0 := 0
template <typename Scalar>
Scalar xlog2x(Scalar x) {
    return x > Scalar(0) ? x * std::log2(x) : Scalar(0);
}

template <typename Scalar>
Scalar binary_entropy(Scalar p) {
    if (!(p >= Scalar(0) && p <= Scalar(1))) {
        throw std::domain_error("binary_entropy: p must lie in [0, 1]");
    }
    return -xlog2x(p) - xlog2x(Scalar(1) - p);
}

template <typename Range>
auto shannon_entropy(const Range& probs) {
    using Scalar = std::decay_t<decltype(*std::begin(probs))>;
    Scalar h(0);
    for (const auto& p : probs) h -= xlog2x(Scalar(p));
    return h;
}

template <typename Scalar>
Scalar entropy_of_spectrum(const RealVector<Scalar>& eigenvalues) {
    const RealVector<Scalar> clipped = clip_spectrum<Scalar>(eigenvalues);
    Scalar h(0);
    for (Eigen::Index i = 0; i < clipped.size(); ++i) h -= xlog2x(clipped[i]);
    return std::max(h, Scalar(0));
}

template <typename Scalar>
Scalar von_neumann_entropy(const DensityMatrix<Scalar>& rho) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix<Scalar>> solver(rho.matrix(), Eigen::EigenvaluesOnly);
    return entropy_of_spectrum<Scalar>(solver.eigenvalues());
}

// S(rho || sigma); +infinity when supp(rho) is not inside supp(sigma).
template <typename Scalar>
Scalar relative_entropy(const DensityMatrix<Scalar>& rho, const DensityMatrix<Scalar>& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw std::invalid_argument("relative_entropy: dimension mismatch");
    }
    const auto sig = herm_eig(sigma.matrix());
    const ComplexMatrix<Scalar> rotated = sig.eigenvectors.adjoint() * rho.matrix() * sig.eigenvectors;
    Scalar cross(0);
    for (Eigen::Index j = 0; j < sig.eigenvalues.size(); ++j) {
        const Scalar weight = rotated(j, j).real();
        const Scalar mu = sig.eigenvalues[j];
        if (mu < Scalar(tol::kSupport)) {
            if (weight > Scalar(tol::kSupport)) return std::numeric_limits<Scalar>::infinity();
            continue;
        }
        cross += weight * std::log2(mu);
    }
    const Scalar value = -von_neumann_entropy(rho) - cross;
    return value < Scalar(0) && value > -Scalar(tol::kNegativeEigenvalue) ? Scalar(0) : value;
}

template <typename Derived>
void require_orthonormal(const Eigen::MatrixBase<Derived>& basis, const char* who) {
    if (basis.rows() != basis.cols()) {
        throw std::invalid_argument(std::string(who) + ": basis must be square");
    }
    const auto gram = (basis.adjoint() * basis).eval();
    const auto defect = (gram - decltype(gram)::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    if (defect > tol::kOrthonormal) {
        throw std::invalid_argument(std::string(who) + ": basis is not orthonormal");
    }
}

// Full dephasing in the basis given by the columns of `basis`.
template <typename Scalar>
DensityMatrix<Scalar> dephase(const DensityMatrix<Scalar>& rho, const ComplexMatrix<Scalar>& basis) {
    if (basis.rows() != rho.dim()) {
        throw std::invalid_argument("dephase: basis dimension mismatch");
    }
    require_orthonormal(basis, "dephase");
    const ComplexMatrix<Scalar> diag = (basis.adjoint() * rho.matrix() * basis).diagonal().asDiagonal();
    return DensityMatrix<Scalar>(basis * diag * basis.adjoint(), rho.subsystem_dims());
}

// Dephasing in the computational (pointer) basis.
template <typename Scalar>
DensityMatrix<Scalar> dephase(const DensityMatrix<Scalar>& rho) {
    ComplexMatrix<Scalar> diag = rho.matrix().diagonal().asDiagonal();
    return DensityMatrix<Scalar>(std::move(diag), rho.subsystem_dims());
}

template <typename Scalar>
Scalar coherence_rel_entropy(const DensityMatrix<Scalar>& rho, const ComplexMatrix<Scalar>& basis) {
    return std::max(Scalar(0), von_neumann_entropy(dephase(rho, basis)) - von_neumann_entropy(rho));
}

template <typename Scalar>
Scalar coherence_rel_entropy(const DensityMatrix<Scalar>& rho) {
    return std::max(Scalar(0), von_neumann_entropy(dephase(rho)) - von_neumann_entropy(rho));
}

// B(rho, sigma) = Tr sqrt(sqrt(rho) sigma sqrt(rho)), evaluated as the nuclear
// norm of sqrt(rho) sqrt(sigma).
template <typename Scalar>
Scalar fidelity(const DensityMatrix<Scalar>& rho, const DensityMatrix<Scalar>& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw std::invalid_argument("fidelity: dimension mismatch");
    }
    const Scalar b = nuclear_norm((sqrt_psd(rho.matrix()) * sqrt_psd(sigma.matrix())).eval());
    return std::clamp(b, Scalar(0), Scalar(1));
}

template <typename Scalar>
Scalar quantum_mutual_info(const DensityMatrix<Scalar>& sigma) {
    if (sigma.subsystems() != 2) {
        throw std::invalid_argument("quantum_mutual_info: state must have exactly two subsystems");
    }
    const Scalar value = von_neumann_entropy(partial_trace(sigma, 0)) + von_neumann_entropy(partial_trace(sigma, 1)) -
                         von_neumann_entropy(sigma);
    return std::max(value, Scalar(0));
}

// {p_i, rho_i}: conditional environment states with pointer probabilities.
template <typename Scalar>
class EnvEnsemble {
public:
    EnvEnsemble(std::vector<Scalar> probs, std::vector<DensityMatrix<Scalar>> states)
        : probs_(std::move(probs)), states_(std::move(states)) {
        if (probs_.empty() || probs_.size() != states_.size()) {
            throw std::invalid_argument("EnvEnsemble: need one state per probability");
        }
        Scalar total(0);
        for (Scalar p : probs_) {
            if (!(p >= Scalar(0))) throw std::invalid_argument("EnvEnsemble: negative probability");
            total += p;
        }
        if (std::abs(total - Scalar(1)) > Scalar(tol::kProbabilitySum)) {
            throw std::invalid_argument("EnvEnsemble: probabilities do not sum to 1");
        }
        for (const auto& s : states_) {
            if (s.dim() != states_.front().dim()) {
                throw std::invalid_argument("EnvEnsemble: states have different dimensions");
            }
        }
    }

    std::size_t size() const { return probs_.size(); }
    Eigen::Index dim() const { return states_.front().dim(); }
    const std::vector<Scalar>& probs() const { return probs_; }
    const std::vector<DensityMatrix<Scalar>>& states() const { return states_; }
    Scalar prob(std::size_t i) const { return probs_[i]; }
    const DensityMatrix<Scalar>& state(std::size_t i) const { return states_[i]; }

    DensityMatrix<Scalar> mixture() const {
        ComplexMatrix<Scalar> m = ComplexMatrix<Scalar>::Zero(dim(), dim());
        for (std::size_t i = 0; i < size(); ++i) m += probs_[i] * states_[i].matrix();
        return DensityMatrix<Scalar>(std::move(m));
    }

    // H(I), the Shannon entropy of the index.
    Scalar index_entropy() const { return shannon_entropy(probs_); }

private:
    std::vector<Scalar> probs_;
    std::vector<DensityMatrix<Scalar>> states_;
};

template <typename Scalar>
class Povm {
public:
    using Matrix = ComplexMatrix<Scalar>;

    explicit Povm(std::vector<Matrix> elements) : elements_(std::move(elements)) {
        if (elements_.empty()) throw std::invalid_argument("Povm: no elements");
        const Eigen::Index d = elements_.front().rows();
        Matrix total = Matrix::Zero(d, d);
        for (auto& e : elements_) {
            if (e.rows() != d || e.cols() != d) throw std::invalid_argument("Povm: element dimension mismatch");
            if (hermitian_defect(e) > Scalar(tol::kPovm)) throw std::invalid_argument("Povm: element not Hermitian");
            e = (e + e.adjoint()).eval() / Scalar(2);
            Eigen::SelfAdjointEigenSolver<Matrix> solver(e, Eigen::EigenvaluesOnly);
            if (solver.eigenvalues()[0] < -Scalar(tol::kPovm)) {
                throw std::invalid_argument("Povm: element not positive semidefinite");
            }
            total += e;
        }
        if ((total - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > Scalar(tol::kPovm)) {
            throw std::invalid_argument("Povm: elements do not sum to identity");
        }
    }

    // Rank-one projectors onto the columns of an orthonormal basis.
    static Povm projective(const Matrix& basis) {
        require_orthonormal(basis, "Povm::projective");
        std::vector<Matrix> elements;
        for (Eigen::Index k = 0; k < basis.cols(); ++k) elements.push_back(basis.col(k) * basis.col(k).adjoint());
        return Povm(std::move(elements));
    }

    static Povm trivial(Eigen::Index dim) { return Povm({Matrix::Identity(dim, dim)}); }

    std::size_t size() const { return elements_.size(); }
    Eigen::Index dim() const { return elements_.front().rows(); }
    const std::vector<Matrix>& elements() const { return elements_; }
    const Matrix& element(std::size_t m) const { return elements_[m]; }

private:
    std::vector<Matrix> elements_;
};

// Joint distribution P(i, m) = p_i Tr[rho_i M_m]; rows index the ensemble.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> outcome_joint(const EnvEnsemble<Scalar>& e,
                                                                    const Povm<Scalar>& m) {
    if (e.dim() != m.dim()) {
        throw std::invalid_argument("outcome_joint: ensemble and POVM dimensions differ");
    }
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> joint(e.size(), m.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        for (std::size_t k = 0; k < m.size(); ++k) {
            const Scalar v = e.prob(i) * (e.state(i).matrix().cwiseProduct(m.element(k).transpose())).sum().real();
            joint(i, k) = std::max(v, Scalar(0));
        }
    }
    return joint;
}

template <typename Scalar>
Scalar conditional_entropy_of_joint(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& joint) {
    Scalar h(0);
    for (Eigen::Index k = 0; k < joint.cols(); ++k) {
        const Scalar pm = joint.col(k).sum();
        if (pm <= Scalar(0)) continue;
        for (Eigen::Index i = 0; i < joint.rows(); ++i) {
            const Scalar pim = joint(i, k);
            if (pim > Scalar(0)) h -= pim * std::log2(pim / pm);
        }
    }
    return std::max(h, Scalar(0));
}

// H(I|M)
template <typename Scalar>
Scalar conditional_entropy(const EnvEnsemble<Scalar>& e, const Povm<Scalar>& m) {
    return std::min(conditional_entropy_of_joint(outcome_joint(e, m)), e.index_entropy());
}

template <typename Scalar>
Scalar holevo_chi(const EnvEnsemble<Scalar>& e) {
    Scalar average(0);
    for (std::size_t i = 0; i < e.size(); ++i) average += e.prob(i) * von_neumann_entropy(e.state(i));
    return std::max(von_neumann_entropy(e.mixture()) - average, Scalar(0));
}

}  // namespace dephent

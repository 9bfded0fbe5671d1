#include "dephent/povm_opt.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "dephent/lbfgs.hpp"
#include "dephent/parallel.hpp"
#include "dephent/random_instances.hpp"

namespace dephent {

namespace {

using Solver = Eigen::SelfAdjointEigenSolver<MatrixXc>;

constexpr double kSupportCut = 1e-12;
constexpr double kPadScale = 1e-3;

Solver hermitian_solver(const MatrixXc& m) { return Solver((m + m.adjoint()) / 2.0); }

// Maps nearly complete PSD elements onto an exact resolution of the identity.
PovmX normalize_elements(std::vector<MatrixXc> elements) {
    const Eigen::Index d = elements.front().rows();
    MatrixXc total = MatrixXc::Zero(d, d);
    for (auto& e : elements) {
        e = (e + e.adjoint()).eval() / 2.0;
        total += e;
    }
    const Solver solver = hermitian_solver(total);
    if (solver.eigenvalues().minCoeff() <= 0.0) throw std::domain_error("normalize_elements: incomplete POVM");
    const MatrixXc r = solver.eigenvectors() *
                       solver.eigenvalues().cwiseInverse().cwiseSqrt().cast<std::complex<double>>().asDiagonal() *
                       solver.eigenvectors().adjoint();
    for (auto& e : elements) e = r * e * r;
    return PovmX(std::move(elements));
}

MatrixXc support_inverse_sqrt(const Solver& solver) {
    const Eigen::VectorXd& values = solver.eigenvalues();
    Eigen::VectorXd inv(values.size());
    for (Eigen::Index k = 0; k < values.size(); ++k) inv[k] = values[k] > kSupportCut ? 1.0 / std::sqrt(values[k]) : 0.0;
    return solver.eigenvectors() * inv.cast<std::complex<double>>().asDiagonal() * solver.eigenvectors().adjoint();
}

PovmX eigenbasis_povm(const MatrixXc& h) { return PovmX::projective(hermitian_solver(h).eigenvectors()); }

// 2-outcome projective grid over the Bloch sphere for qubit environments.
PovmX qubit_grid_povm(const Ensemble& e) {
    constexpr int kPolar = 256;
    constexpr int kAzimuth = 128;
    std::vector<Eigen::Vector3d> bloch;
    for (const auto& s : e.states()) {
        const auto& m = s.matrix();
        bloch.emplace_back(2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(), (m(0, 0) - m(1, 1)).real());
    }
    double best_h = std::numeric_limits<double>::infinity();
    double best_theta = 0.0;
    double best_phi = 0.0;
    Eigen::MatrixXd joint(e.size(), 2);
    for (int a = 0; a < kPolar; ++a) {
        const double theta = std::numbers::pi * a / (kPolar - 1);
        for (int b = 0; b < kAzimuth; ++b) {
            const double phi = 2.0 * std::numbers::pi * b / kAzimuth;
            const Eigen::Vector3d n(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
            for (std::size_t i = 0; i < e.size(); ++i) {
                const double up = std::clamp((1.0 + bloch[i].dot(n)) / 2.0, 0.0, 1.0);
                joint(static_cast<Eigen::Index>(i), 0) = e.prob(i) * up;
                joint(static_cast<Eigen::Index>(i), 1) = e.prob(i) * (1.0 - up);
            }
            const double h = conditional_entropy_of_joint<double>(joint);
            if (h < best_h) {
                best_h = h;
                best_theta = theta;
                best_phi = phi;
            }
        }
    }
    MatrixXc basis(2, 2);
    const std::complex<double> phase = std::polar(1.0, best_phi);
    basis << std::cos(best_theta / 2.0), -std::conj(phase) * std::sin(best_theta / 2.0),
        phase * std::sin(best_theta / 2.0), std::cos(best_theta / 2.0);
    return PovmX::projective(basis);
}

struct Candidate {
    PovmX povm;
    std::string origin;
};

struct Scored {
    std::optional<PovmX> povm;
    double value = 0.0;
    std::string origin;
    bool valid = false;
};

}  // namespace

void PovmSearchConfig::validate() const {
    if (n_outcomes != 0 && n_outcomes < 2) throw std::invalid_argument("PovmSearchConfig: n_outcomes must be >= 2");
    if (restarts < 0 || max_iters < 1) throw std::invalid_argument("PovmSearchConfig: counts must be positive");
    if (!(step_tolerance > 0.0)) throw std::invalid_argument("PovmSearchConfig: step_tolerance must be positive");
}

double mutual_info_classical(const Ensemble& e, const PovmX& m) {
    return std::clamp(e.index_entropy() - conditional_entropy(e, m), 0.0, e.index_entropy());
}

double jain_bound(double p, double b) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("jain_bound: p outside [0, 1]");
    if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("jain_bound: b outside [0, 1]");
    return binary_entropy(p) - 2.0 * std::sqrt(p * (1.0 - p)) * b;
}

PovmX env_eigenbasis_povm(const Ensemble& e) { return eigenbasis_povm(e.mixture().matrix()); }

PovmX fuchs_caves_povm(const State& rho, const State& sigma) {
    if (rho.dim() != sigma.dim()) throw std::invalid_argument("fuchs_caves_povm: dimension mismatch");
    const Eigen::Index d = rho.dim();
    const Solver rho_eig = hermitian_solver(rho.matrix());
    std::vector<Eigen::Index> support;
    std::vector<Eigen::Index> kernel;
    for (Eigen::Index k = 0; k < d; ++k) (rho_eig.eigenvalues()[k] > kSupportCut ? support : kernel).push_back(k);
    const auto r = static_cast<Eigen::Index>(support.size());
    MatrixXc p(d, r);
    for (Eigen::Index k = 0; k < r; ++k) p.col(k) = rho_eig.eigenvectors().col(support[static_cast<std::size_t>(k)]);
    // M = rho^{-1/2} (rho^{1/2} sigma rho^{1/2})^{1/2} rho^{-1/2} on supp(rho)
    const MatrixXc root = sqrt_psd(rho.matrix());
    const MatrixXc inner = root * sigma.matrix() * root;
    const MatrixXc inner_root = sqrt_psd(((inner + inner.adjoint()) / 2.0).eval());
    const MatrixXc inv_root = support_inverse_sqrt(rho_eig);
    const MatrixXc m = inv_root * inner_root * inv_root;
    const Solver restricted = hermitian_solver(p.adjoint() * m * p);
    MatrixXc basis(d, d);
    basis.leftCols(r) = p * restricted.eigenvectors();
    for (std::size_t k = 0; k < kernel.size(); ++k) {
        basis.col(r + static_cast<Eigen::Index>(k)) = rho_eig.eigenvectors().col(kernel[k]);
    }
    return PovmX::projective(basis);
}

PovmX pretty_good_povm(const Ensemble& e) {
    const Solver avg = hermitian_solver(e.mixture().matrix());
    const MatrixXc r = support_inverse_sqrt(avg);
    std::vector<MatrixXc> elements;
    for (std::size_t i = 0; i < e.size(); ++i) elements.push_back(r * (e.prob(i) * e.state(i).matrix()) * r);
    MatrixXc kernel = MatrixXc::Zero(e.dim(), e.dim());
    for (Eigen::Index k = 0; k < e.dim(); ++k) {
        if (avg.eigenvalues()[k] <= kSupportCut) kernel += avg.eigenvectors().col(k) * avg.eigenvectors().col(k).adjoint();
    }
    elements.front() += kernel;
    return normalize_elements(std::move(elements));
}

PovmX povm_from_vectors(const MatrixXc& y) {
    const MatrixXc s = y * y.adjoint();
    const MatrixXc r = support_inverse_sqrt(hermitian_solver(s));
    std::vector<MatrixXc> elements;
    for (Eigen::Index m = 0; m < y.cols(); ++m) {
        const VectorXc z = r * y.col(m);
        elements.push_back(z * z.adjoint());
    }
    return normalize_elements(std::move(elements));
}

MatrixXc rank_one_vectors(const PovmX& m) {
    std::vector<VectorXc> cols;
    for (const auto& element : m.elements()) {
        const Solver solver = hermitian_solver(element);
        for (Eigen::Index k = 0; k < element.rows(); ++k) {
            const double lambda = solver.eigenvalues()[k];
            if (lambda > tol::kSpectralZero) cols.push_back(std::sqrt(lambda) * solver.eigenvectors().col(k));
        }
    }
    MatrixXc y(m.dim(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) y.col(static_cast<Eigen::Index>(k)) = cols[k];
    return y;
}

namespace detail {

Eigen::VectorXd pack_vectors(const MatrixXc& y) {
    Eigen::VectorXd x(2 * y.size());
    for (Eigen::Index m = 0; m < y.cols(); ++m) {
        for (Eigen::Index a = 0; a < y.rows(); ++a) {
            x[2 * (m * y.rows() + a)] = y(a, m).real();
            x[2 * (m * y.rows() + a) + 1] = y(a, m).imag();
        }
    }
    return x;
}

MatrixXc unpack_vectors(const Eigen::VectorXd& x, Eigen::Index dim, Eigen::Index n) {
    if (x.size() != 2 * dim * n) throw std::invalid_argument("unpack_vectors: size mismatch");
    MatrixXc y(dim, n);
    for (Eigen::Index m = 0; m < n; ++m)
        for (Eigen::Index a = 0; a < dim; ++a) y(a, m) = {x[2 * (m * dim + a)], x[2 * (m * dim + a) + 1]};
    return y;
}

double povm_objective(const Ensemble& e, Eigen::Index n_outcomes, const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
    const Eigen::Index d = e.dim();
    const MatrixXc y = unpack_vectors(x, d, n_outcomes);
    const Solver solver(y * y.adjoint());
    const Eigen::VectorXd& lambda = solver.eigenvalues();
    if (!(lambda.minCoeff() > 1e-14 * std::max(1.0, lambda.maxCoeff()))) {
        return std::numeric_limits<double>::infinity();
    }
    const MatrixXc& u = solver.eigenvectors();
    const Eigen::VectorXd inv_sqrt = lambda.cwiseSqrt().cwiseInverse();
    const MatrixXc r = u * inv_sqrt.cast<std::complex<double>>().asDiagonal() * u.adjoint();
    const MatrixXc z = r * y;

    const auto n_states = static_cast<Eigen::Index>(e.size());
    Eigen::MatrixXd joint(n_states, n_outcomes);
    std::vector<MatrixXc> weighted;
    for (std::size_t i = 0; i < e.size(); ++i) weighted.push_back(e.prob(i) * e.state(i).matrix());
    for (Eigen::Index i = 0; i < n_states; ++i) {
        const MatrixXc wz = weighted[static_cast<std::size_t>(i)] * z;
        for (Eigen::Index m = 0; m < n_outcomes; ++m) {
            joint(i, m) = std::max(0.0, z.col(m).dot(wz.col(m)).real());
        }
    }
    double value = 0.0;
    MatrixXc w = MatrixXc::Zero(d, n_outcomes);  // columns G_m z_m
    for (Eigen::Index m = 0; m < n_outcomes; ++m) {
        const double pm = joint.col(m).sum();
        if (pm <= 0.0) continue;
        for (Eigen::Index i = 0; i < n_states; ++i) {
            const double pim = joint(i, m);
            if (pim <= 0.0) continue;
            const double lg = std::log2(pim / pm);
            value -= pim * lg;
            w.col(m) += lg * (weighted[static_cast<std::size_t>(i)] * z.col(m));
        }
    }
    // H = A + A^dagger with A = sum_m y_m w_m^dagger; Q = D(x^{-1/2})(S)[H]
    const MatrixXc a = y * w.adjoint();
    MatrixXc h_rot = u.adjoint() * (a + a.adjoint()) * u;
    for (Eigen::Index p = 0; p < d; ++p) {
        for (Eigen::Index q = 0; q < d; ++q) {
            const double sp = std::sqrt(lambda[p]);
            const double sq = std::sqrt(lambda[q]);
            h_rot(p, q) *= -1.0 / (sp * sq * (sp + sq));
        }
    }
    const MatrixXc q = u * h_rot * u.adjoint();
    // d H(I|M) / d y_m = -2 (R G_m R + Q) y_m
    const MatrixXc g = -2.0 * (r * w + q * y);
    grad = pack_vectors(g);
    return value;
}

}  // namespace detail

PovmSearchResult optimize_povm(const Ensemble& e, const PovmSearchConfig& cfg) {
    cfg.validate();
    const Eigen::Index d = e.dim();
    const Eigen::Index n_default = cfg.n_outcomes == 0 ? d * d : cfg.n_outcomes;

    std::vector<Candidate> structured;
    structured.push_back({env_eigenbasis_povm(e), "env_eigenbasis"});
    for (std::size_t i = 0; i < e.size(); ++i) {
        structured.push_back({eigenbasis_povm(e.state(i).matrix()), "state_eigenbasis_" + std::to_string(i)});
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
        for (std::size_t j = i + 1; j < e.size(); ++j) {
            const MatrixXc diff = e.prob(i) * e.state(i).matrix() - e.prob(j) * e.state(j).matrix();
            const std::string pair = std::to_string(i) + "_" + std::to_string(j);
            structured.push_back({eigenbasis_povm(diff), "helstrom_" + pair});
            structured.push_back({fuchs_caves_povm(e.state(i), e.state(j)), "fuchs_caves_" + pair});
            structured.push_back({fuchs_caves_povm(e.state(j), e.state(i)), "fuchs_caves_" + std::to_string(j) + "_" +
                                                                                 std::to_string(i)});
        }
    }
    structured.push_back({pretty_good_povm(e), "pretty_good"});
    if (d == 2) structured.push_back({qubit_grid_povm(e), "qubit_grid"});

    const std::size_t n_struct = structured.size();
    const std::size_t n_jobs = 2 * n_struct + static_cast<std::size_t>(cfg.restarts);
    std::vector<Scored> scored(n_jobs);

    LbfgsOptions options;
    options.max_iters = cfg.max_iters;
    options.step_tolerance = cfg.step_tolerance;

    auto run_from = [&](MatrixXc y, Scored& out, const std::string& origin) {
        const Eigen::Index n = y.cols();
        const Objective objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
            return detail::povm_objective(e, n, x, grad);
        };
        const LbfgsResult res = minimize_lbfgs(objective, detail::pack_vectors(y), options);
        PovmX povm = povm_from_vectors(detail::unpack_vectors(res.x, d, n));
        const double value = mutual_info_classical(e, povm);
        out = {std::move(povm), value, origin, true};
    };

    parallel_for(n_jobs, cfg.parallelism, [&](std::size_t job) {
        Rng rng = stream_rng(cfg.seed, job);
        std::normal_distribution<double> normal(0.0, 1.0);
        auto gaussian = [&](Eigen::Index rows, Eigen::Index cols) {
            MatrixXc g(rows, cols);
            for (Eigen::Index c = 0; c < cols; ++c)
                for (Eigen::Index r = 0; r < rows; ++r) g(r, c) = {normal(rng), normal(rng)};
            return g;
        };
        try {
            if (job < n_struct) {
                const Candidate& c = structured[job];
                scored[job] = {c.povm, mutual_info_classical(e, c.povm), c.origin, true};
            } else if (job < 2 * n_struct) {
                const Candidate& c = structured[job - n_struct];
                const MatrixXc base = rank_one_vectors(c.povm);
                const Eigen::Index n = std::max(n_default, base.cols());
                MatrixXc y = kPadScale * gaussian(d, n);
                y.leftCols(base.cols()) = base;
                run_from(std::move(y), scored[job], c.origin + "+lbfgs");
            } else {
                run_from(gaussian(d, n_default), scored[job], "random_" + std::to_string(job - 2 * n_struct));
            }
        } catch (const std::domain_error&) {
            scored[job].valid = false;  // degenerate start; other candidates cover it
        } catch (const std::invalid_argument&) {
            scored[job].valid = false;
        }
    });

    std::size_t best = n_jobs;
    for (std::size_t k = 0; k < n_jobs; ++k) {
        if (!scored[k].valid) continue;
        if (best == n_jobs || scored[k].value > scored[best].value) best = k;
    }
    if (best == n_jobs) throw std::runtime_error("optimize_povm: no valid candidate");
    return {*scored[best].povm, scored[best].value, scored[best].origin};
}

}  // namespace dephent

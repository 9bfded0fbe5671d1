#include "dephent/ree_bracket.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "dephent/info.hpp"
#include "dephent/lbfgs.hpp"
#include "dephent/parallel.hpp"
#include "dephent/random_instances.hpp"

namespace dephent {

namespace {

using Solver = Eigen::SelfAdjointEigenSolver<MatrixXc>;

constexpr double kPadWeight = 1e-6;
constexpr double kTermCut = 1e-15;

void require_bipartite(const State& sigma, const char* who) {
    if (sigma.subsystems() != 2) throw std::invalid_argument(std::string(who) + ": state must be bipartite");
}

Eigen::Index per_term(const Dims& dims) { return 1 + 2 * dims[0] + 2 * dims[1]; }

// Appends the spectral decomposition of a PSD block as product terms with a fixed S factor.
void add_block_terms(SeparableAnsatz& out, const VectorXc& a, const MatrixXc& block, bool block_is_system) {
    const Solver solver((block + block.adjoint()) / 2.0);
    for (Eigen::Index k = 0; k < block.rows(); ++k) {
        const double w = solver.eigenvalues()[k];
        if (w <= kTermCut) continue;
        if (block_is_system) {
            out.factors.emplace_back(solver.eigenvectors().col(k), a);
        } else {
            out.factors.emplace_back(a, solver.eigenvectors().col(k));
        }
        out.weights.push_back(w);
    }
}

MatrixXc env_block(const MatrixXc& sigma, const Dims& dims, const VectorXc& a) {
    const Eigen::Index ds = dims[0];
    const Eigen::Index de = dims[1];
    MatrixXc block = MatrixXc::Zero(de, de);
    for (Eigen::Index i = 0; i < ds; ++i)
        for (Eigen::Index j = 0; j < ds; ++j)
            block += std::conj(a[i]) * a[j] * sigma.block(i * de, j * de, de, de);
    return block;
}

MatrixXc sys_block(const MatrixXc& sigma, const Dims& dims, const VectorXc& b) {
    const Eigen::Index ds = dims[0];
    const Eigen::Index de = dims[1];
    MatrixXc block(ds, ds);
    for (Eigen::Index i = 0; i < ds; ++i)
        for (Eigen::Index j = 0; j < ds; ++j) block(i, j) = b.dot(sigma.block(i * de, j * de, de, de) * b);
    return block;
}

void normalize_weights(SeparableAnsatz& a) {
    double total = 0.0;
    for (double w : a.weights) total += w;
    for (double& w : a.weights) w /= total;
}

// Structured separable candidates; each is exact in a limiting case.
std::vector<std::pair<SeparableAnsatz, std::string>> structured_seeds(const State& sigma) {
    const Dims& dims = sigma.subsystem_dims();
    const MatrixXc& m = sigma.matrix();
    const Solver sys((partial_trace(sigma, 0).matrix()));
    const Solver env((partial_trace(sigma, 1).matrix()));
    std::vector<std::pair<SeparableAnsatz, std::string>> seeds;

    SeparableAnsatz product{dims, {}, {}, 0.0};
    for (Eigen::Index a = 0; a < dims[0]; ++a)
        for (Eigen::Index b = 0; b < dims[1]; ++b) {
            const double w = sys.eigenvalues()[a] * env.eigenvalues()[b];
            if (w <= kTermCut) continue;
            product.weights.push_back(w);
            product.factors.emplace_back(sys.eigenvectors().col(a), env.eigenvectors().col(b));
        }
    seeds.emplace_back(product, "marginal_product");

    SeparableAnsatz pointer{dims, {}, {}, 0.0};
    for (Eigen::Index i = 0; i < dims[0]; ++i) {
        const VectorXc a = VectorXc::Unit(dims[0], i);
        add_block_terms(pointer, a, env_block(m, dims, a), false);
    }
    seeds.emplace_back(pointer, "cq_pointer");

    SeparableAnsatz cq{dims, {}, {}, 0.0};
    for (Eigen::Index i = 0; i < dims[0]; ++i) {
        const VectorXc a = sys.eigenvectors().col(i);
        add_block_terms(cq, a, env_block(m, dims, a), false);
    }
    seeds.emplace_back(cq, "cq_system_eigenbasis");

    SeparableAnsatz qc{dims, {}, {}, 0.0};
    for (Eigen::Index j = 0; j < dims[1]; ++j) {
        const VectorXc b = env.eigenvectors().col(j);
        add_block_terms(qc, b, sys_block(m, dims, b), true);
    }
    seeds.emplace_back(qc, "qc_env_eigenbasis");

    SeparableAnsatz local{dims, {}, {}, 0.0};
    for (Eigen::Index a = 0; a < dims[0]; ++a)
        for (Eigen::Index b = 0; b < dims[1]; ++b) {
            const VectorXc psi = kron(sys.eigenvectors().col(a), env.eigenvectors().col(b));
            const double w = psi.dot(m * psi).real();
            if (w <= kTermCut) continue;
            local.weights.push_back(w);
            local.factors.emplace_back(sys.eigenvectors().col(a), env.eigenvectors().col(b));
        }
    seeds.emplace_back(local, "local_eigenbasis_dephasing");

    for (auto& s : seeds) normalize_weights(s.first);
    return seeds;
}

// Divided differences of ln on a spectrum.
Eigen::MatrixXd log_divided_differences(const Eigen::VectorXd& lambda) {
    const Eigen::Index d = lambda.size();
    Eigen::MatrixXd l(d, d);
    for (Eigen::Index p = 0; p < d; ++p) {
        for (Eigen::Index q = 0; q < d; ++q) {
            const double diff = lambda[p] - lambda[q];
            if (std::abs(diff) <= 1e-8 * std::max(lambda[p], lambda[q])) {
                l(p, q) = 2.0 / (lambda[p] + lambda[q]);
            } else {
                l(p, q) = std::log1p(diff / lambda[q]) / diff;
            }
        }
    }
    return l;
}

double evaluate(const State& sigma, const SeparableAnsatz& ansatz) {
    return relative_entropy(sigma, State::from_unnormalized(ansatz.matrix(), sigma.subsystem_dims()));
}

struct Outcome {
    std::optional<SeparableAnsatz> ansatz;
    double value = std::numeric_limits<double>::infinity();
    std::string origin;
};

}  // namespace

void SeparableAnsatz::validate() const {
    if (dims.size() != 2) throw std::invalid_argument("SeparableAnsatz: need two subsystem dimensions");
    if (weights.empty() || weights.size() != factors.size()) {
        throw std::invalid_argument("SeparableAnsatz: need one factor pair per weight");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("SeparableAnsatz: negative weight");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-10) throw std::invalid_argument("SeparableAnsatz: weights do not sum to 1");
    for (const auto& [a, b] : factors) {
        if (a.size() != dims[0] || b.size() != dims[1]) throw std::invalid_argument("SeparableAnsatz: factor size");
        if (std::abs(a.norm() - 1.0) > 1e-10 || std::abs(b.norm() - 1.0) > 1e-10) {
            throw std::invalid_argument("SeparableAnsatz: factors not normalized");
        }
    }
    if (!(blend >= 0.0 && blend <= 1.0)) throw std::invalid_argument("SeparableAnsatz: blend outside [0, 1]");
}

MatrixXc SeparableAnsatz::matrix() const {
    const Eigen::Index d = dims_product(dims);
    MatrixXc xi = MatrixXc::Zero(d, d);
    for (std::size_t k = 0; k < weights.size(); ++k) {
        const VectorXc psi = kron(factors[k].first, factors[k].second);
        xi += weights[k] * psi * psi.adjoint();
    }
    return (1.0 - blend) * xi + blend * MatrixXc::Identity(d, d) / static_cast<double>(d);
}

PptResult is_ppt(const State& sigma) {
    require_bipartite(sigma, "is_ppt");
    const MatrixXc pt = partial_transpose(sigma, 1);
    const Solver solver((pt + pt.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    const double min_eig = solver.eigenvalues()[0];
    return {min_eig >= -tol::kNegativeEigenvalue, min_eig};
}

void ReeSearchConfig::validate() const {
    if (terms < 0 || restarts < 0 || max_iters < 1) throw std::invalid_argument("ReeSearchConfig: bad counts");
    if (!(step_tolerance > 0.0)) throw std::invalid_argument("ReeSearchConfig: step_tolerance must be positive");
}

double ree_lower_bracket(const State& sigma) {
    require_bipartite(sigma, "ree_lower_bracket");
    const double joint = von_neumann_entropy(sigma);
    const double s = von_neumann_entropy(partial_trace(sigma, 0)) - joint;
    const double e = von_neumann_entropy(partial_trace(sigma, 1)) - joint;
    return std::max({0.0, s, e});
}

namespace detail {

Eigen::VectorXd pack_ansatz(const SeparableAnsatz& ansatz) {
    const Eigen::Index stride = per_term(ansatz.dims);
    Eigen::VectorXd x(stride * static_cast<Eigen::Index>(ansatz.weights.size()));
    for (std::size_t k = 0; k < ansatz.weights.size(); ++k) {
        Eigen::Index o = stride * static_cast<Eigen::Index>(k);
        x[o++] = std::log(std::max(ansatz.weights[k], 1e-300));
        for (const VectorXc* v : {&ansatz.factors[k].first, &ansatz.factors[k].second}) {
            for (Eigen::Index i = 0; i < v->size(); ++i) {
                x[o++] = (*v)[i].real();
                x[o++] = (*v)[i].imag();
            }
        }
    }
    return x;
}

SeparableAnsatz unpack_ansatz(const Eigen::VectorXd& x, const Dims& dims, Eigen::Index terms, double blend) {
    const Eigen::Index stride = per_term(dims);
    if (x.size() != stride * terms) throw std::invalid_argument("unpack_ansatz: size mismatch");
    SeparableAnsatz out{dims, {}, {}, blend};
    double top = -std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < terms; ++k) top = std::max(top, x[stride * k]);
    for (Eigen::Index k = 0; k < terms; ++k) {
        Eigen::Index o = stride * k;
        out.weights.push_back(std::exp(x[o++] - top));
        VectorXc a(dims[0]);
        VectorXc b(dims[1]);
        for (Eigen::Index i = 0; i < dims[0]; ++i, o += 2) a[i] = {x[o], x[o + 1]};
        for (Eigen::Index i = 0; i < dims[1]; ++i, o += 2) b[i] = {x[o], x[o + 1]};
        out.factors.emplace_back(a / a.norm(), b / b.norm());
    }
    normalize_weights(out);
    return out;
}

double ree_objective(const MatrixXc& sigma, const Dims& dims, Eigen::Index terms, double blend,
                     const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
    const Eigen::Index ds = dims[0];
    const Eigen::Index de = dims[1];
    const Eigen::Index d = ds * de;
    const Eigen::Index stride = per_term(dims);

    std::vector<double> weights(static_cast<std::size_t>(terms));
    std::vector<VectorXc> a_hat(static_cast<std::size_t>(terms));
    std::vector<VectorXc> b_hat(static_cast<std::size_t>(terms));
    std::vector<double> a_norm(static_cast<std::size_t>(terms));
    std::vector<double> b_norm(static_cast<std::size_t>(terms));
    MatrixXc psi(d, terms);
    double top = -std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < terms; ++k) top = std::max(top, x[stride * k]);
    double total = 0.0;
    for (Eigen::Index k = 0; k < terms; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        Eigen::Index o = stride * k;
        weights[kk] = std::exp(x[o++] - top);
        total += weights[kk];
        VectorXc a(ds);
        VectorXc b(de);
        for (Eigen::Index i = 0; i < ds; ++i, o += 2) a[i] = {x[o], x[o + 1]};
        for (Eigen::Index i = 0; i < de; ++i, o += 2) b[i] = {x[o], x[o + 1]};
        a_norm[kk] = a.norm();
        b_norm[kk] = b.norm();
        if (!(a_norm[kk] > 0.0 && b_norm[kk] > 0.0)) return std::numeric_limits<double>::infinity();
        a_hat[kk] = a / a_norm[kk];
        b_hat[kk] = b / b_norm[kk];
        psi.col(k) = kron(a_hat[kk], b_hat[kk]);
    }
    for (double& w : weights) w /= total;

    MatrixXc xi = psi * Eigen::VectorXd::Map(weights.data(), terms).cast<std::complex<double>>().asDiagonal() *
                  psi.adjoint();
    xi = (1.0 - blend) * xi + blend * MatrixXc::Identity(d, d) / static_cast<double>(d);
    const Solver solver((xi + xi.adjoint()) / 2.0);
    const Eigen::VectorXd& lambda = solver.eigenvalues();
    if (!(lambda[0] > 0.0)) return std::numeric_limits<double>::infinity();
    const MatrixXc& v = solver.eigenvectors();
    const MatrixXc rotated = v.adjoint() * sigma * v;
    double value = 0.0;
    for (Eigen::Index p = 0; p < d; ++p) value -= rotated(p, p).real() * std::log2(lambda[p]);

    // dF/dxi = -D log2(xi)[sigma]
    const Eigen::MatrixXd l = log_divided_differences(lambda);
    const MatrixXc g =
        -(1.0 - blend) / std::numbers::ln2 * (v * rotated.cwiseProduct(l.cast<std::complex<double>>()) * v.adjoint());
    const MatrixXc g_psi = g * psi;

    grad.resize(x.size());
    Eigen::VectorXd term_grad(terms);
    for (Eigen::Index k = 0; k < terms; ++k) term_grad[k] = psi.col(k).dot(g_psi.col(k)).real();
    double mean = 0.0;
    for (Eigen::Index k = 0; k < terms; ++k) mean += weights[static_cast<std::size_t>(k)] * term_grad[k];
    for (Eigen::Index k = 0; k < terms; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        Eigen::Index o = stride * k;
        grad[o++] = weights[kk] * (term_grad[k] - mean);
        // u_a = sum_e conj(b_e) (G psi)_{a e}, u'_e = sum_a conj(a_a) (G psi)_{a e}
        VectorXc u = VectorXc::Zero(ds);
        VectorXc u_env = VectorXc::Zero(de);
        for (Eigen::Index i = 0; i < ds; ++i) {
            for (Eigen::Index j = 0; j < de; ++j) {
                const std::complex<double> gp = g_psi(i * de + j, k);
                u[i] += std::conj(b_hat[kk][j]) * gp;
                u_env[j] += std::conj(a_hat[kk][i]) * gp;
            }
        }
        const VectorXc va = 2.0 * weights[kk] * u;
        const VectorXc vb = 2.0 * weights[kk] * u_env;
        const VectorXc ga = (va - a_hat[kk] * a_hat[kk].dot(va).real()) / a_norm[kk];
        const VectorXc gb = (vb - b_hat[kk] * b_hat[kk].dot(vb).real()) / b_norm[kk];
        for (Eigen::Index i = 0; i < ds; ++i) {
            grad[o++] = ga[i].real();
            grad[o++] = ga[i].imag();
        }
        for (Eigen::Index i = 0; i < de; ++i) {
            grad[o++] = gb[i].real();
            grad[o++] = gb[i].imag();
        }
    }
    return value;
}

}  // namespace detail

ReeUpperResult ree_upper_bracket(const State& sigma, const ReeSearchConfig& cfg) {
    require_bipartite(sigma, "ree_upper_bracket");
    cfg.validate();
    if (sigma.dim() > kReeMaxDim) {
        throw std::invalid_argument("ree_upper_bracket: dimension " + std::to_string(sigma.dim()) +
                                    " exceeds the cap of " + std::to_string(kReeMaxDim));
    }
    const Dims& dims = sigma.subsystem_dims();
    const Eigen::Index d = sigma.dim();
    const Eigen::Index terms = cfg.terms == 0 ? d * d : cfg.terms;

    const auto seeds = structured_seeds(sigma);
    const std::size_t n_seeds = seeds.size();
    const std::size_t n_jobs = 2 * n_seeds + static_cast<std::size_t>(cfg.restarts);
    std::vector<Outcome> outcomes(n_jobs);

    LbfgsOptions options;
    options.max_iters = cfg.max_iters;
    options.step_tolerance = cfg.step_tolerance;

    auto optimize_from = [&](const Eigen::VectorXd& x0, Outcome& out, const std::string& origin) {
        const Objective objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
            return detail::ree_objective(sigma.matrix(), dims, terms, kReeBlend, x, grad);
        };
        const LbfgsResult res = minimize_lbfgs(objective, x0, options);
        SeparableAnsatz raw = detail::unpack_ansatz(res.x, dims, terms, 0.0);
        SeparableAnsatz blended = raw;
        blended.blend = kReeBlend;
        const double v_raw = evaluate(sigma, raw);
        const double v_blend = evaluate(sigma, blended);
        if (v_raw <= v_blend) {
            out = {std::move(raw), v_raw, origin};
        } else {
            out = {std::move(blended), v_blend, origin + "+blend"};
        }
    };

    parallel_for(n_jobs, cfg.parallelism, [&](std::size_t job) {
        Rng rng = stream_rng(cfg.seed, job);
        std::normal_distribution<double> normal(0.0, 1.0);
        auto random_vector = [&](Eigen::Index n) {
            VectorXc v(n);
            for (Eigen::Index i = 0; i < n; ++i) v[i] = {normal(rng), normal(rng)};
            return VectorXc(v / v.norm());
        };
        auto padded = [&](SeparableAnsatz a) {
            while (static_cast<Eigen::Index>(a.weights.size()) < terms) {
                a.weights.push_back(kPadWeight);
                a.factors.emplace_back(random_vector(dims[0]), random_vector(dims[1]));
            }
            normalize_weights(a);
            return a;
        };
        if (job < n_seeds) {
            const auto& [ansatz, origin] = seeds[job];
            outcomes[job] = {ansatz, evaluate(sigma, ansatz), origin};
        } else if (job < 2 * n_seeds) {
            const auto& [ansatz, origin] = seeds[job - n_seeds];
            if (static_cast<Eigen::Index>(ansatz.weights.size()) > terms) return;
            optimize_from(detail::pack_ansatz(padded(ansatz)), outcomes[job], origin + "+lbfgs");
        } else {
            SeparableAnsatz start{dims, {}, {}, 0.0};
            start = padded(start);
            std::fill(start.weights.begin(), start.weights.end(), 1.0 / static_cast<double>(terms));
            optimize_from(detail::pack_ansatz(start), outcomes[job], "random_" + std::to_string(job - 2 * n_seeds));
        }
    });

    std::size_t best = 0;
    for (std::size_t k = 1; k < n_jobs; ++k) {
        if (outcomes[k].ansatz && (!outcomes[best].ansatz || outcomes[k].value < outcomes[best].value)) best = k;
    }
    return {outcomes[best].value, *outcomes[best].ansatz, outcomes[best].origin};
}

}  // namespace dephent

#include "dephent/lbfgs.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace dephent {

LbfgsResult minimize_lbfgs(const Objective& objective, Eigen::VectorXd x0, const LbfgsOptions& options) {
    if (options.max_iters < 0 || options.memory < 1) throw std::invalid_argument("minimize_lbfgs: bad options");
    const Eigen::Index n = x0.size();
    LbfgsResult result;
    result.x = std::move(x0);
    Eigen::VectorXd g(n);
    result.value = objective(result.x, g);
    if (!std::isfinite(result.value)) throw std::domain_error("minimize_lbfgs: objective not finite at start");

    std::deque<Eigen::VectorXd> s_hist;
    std::deque<Eigen::VectorXd> y_hist;
    std::deque<double> rho_hist;
    Eigen::VectorXd x_new(n);
    Eigen::VectorXd g_new(n);

    for (int iter = 0; iter < options.max_iters; ++iter) {
        result.iterations = iter + 1;
        if (g.lpNorm<Eigen::Infinity>() < options.gradient_tolerance) {
            result.converged = true;
            break;
        }
        // Two-loop recursion
        Eigen::VectorXd q = g;
        std::vector<double> alpha(s_hist.size());
        for (std::size_t k = s_hist.size(); k-- > 0;) {
            alpha[k] = rho_hist[k] * s_hist[k].dot(q);
            q -= alpha[k] * y_hist[k];
        }
        if (!s_hist.empty()) q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
        for (std::size_t k = 0; k < s_hist.size(); ++k) {
            const double beta = rho_hist[k] * y_hist[k].dot(q);
            q += (alpha[k] - beta) * s_hist[k];
        }
        Eigen::VectorXd direction = -q;
        double slope = direction.dot(g);
        if (!(slope < 0.0)) {
            direction = -g;
            slope = -g.squaredNorm();
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
        }
        double step = s_hist.empty() ? std::min(1.0, 1.0 / std::max(g.norm(), 1e-300)) : 1.0;

        bool accepted = false;
        double f_new = result.value;
        for (int ls = 0; ls < 60; ++ls) {
            x_new = result.x + step * direction;
            f_new = objective(x_new, g_new);
            if (std::isfinite(f_new) && f_new <= result.value + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            result.converged = true;  // no descent possible at working precision
            break;
        }
        Eigen::VectorXd s = x_new - result.x;
        Eigen::VectorXd y = g_new - g;
        result.x = x_new;
        result.value = f_new;
        g = g_new;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            s_hist.push_back(s);
            y_hist.push_back(y);
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > options.memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        if (s.norm() < options.step_tolerance) {
            result.converged = true;
            break;
        }
    }
    return result;
}

}  // namespace dephent

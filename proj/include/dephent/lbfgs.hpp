// lbfgs.hpp: limited-memory BFGS with backtracking line search

#pragma once

#include <functional>

#include <Eigen/Dense>

namespace dephent {

struct LbfgsOptions {
    int max_iters = 500;
    int memory = 10;
    double step_tolerance = 1e-8;      // stop when ||x_{k+1} - x_k|| falls below this
    double gradient_tolerance = 1e-10; // stop when ||g||_inf falls below this
};

struct LbfgsResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Objective returns f(x) and writes the gradient into its second argument.
using Objective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

LbfgsResult minimize_lbfgs(const Objective& objective, Eigen::VectorXd x0, const LbfgsOptions& options = {});

}  // namespace dephent

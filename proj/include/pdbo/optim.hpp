#pragma once

#include <functional>

#include <Eigen/Core>

namespace pdbo::optim {

/// Objective returning f(x) and writing the gradient into `grad`.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

struct LbfgsOptions {
    int max_iterations = 200;
    int history = 8;
    double grad_tolerance = 1e-6;
    double rel_tolerance = 1e-10;
};

struct LbfgsResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Unconstrained limited-memory BFGS with backtracking Armijo line search.
/// Non-finite objective values are treated as +inf and shrink the step.
LbfgsResult minimize(const Objective& f, Eigen::VectorXd x0, const LbfgsOptions& opts = {});

} // namespace pdbo::optim

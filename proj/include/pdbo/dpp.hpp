#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "pdbo/core.hpp"
#include "pdbo/gp.hpp"
#include "pdbo/metrics.hpp"

namespace pdbo::dpp {

/// Simplex weights mixing the K surrogate kernels into the DPP kernel.
struct KernelWeights {
    Eigen::VectorXd lambda;
    /// Set when every optimizer start failed and uniform weights were used.
    bool fallback = false;
};

struct LambdaFitOptions {
    int starts = 5;
    std::uint64_t seed = 0;
    /// Fixed noise added to the mixed Gram matrix.
    double noise = 1e-4;
};

/// Log marginal likelihood of `targets` under the Gram matrix
/// sum_i lambda_i grams[i] + noise I. Writes d/dlambda into `grad` if given.
/// Returns -inf if the matrix is not positive definite.
double mixture_lml(const std::vector<Eigen::MatrixXd>& grams, const Eigen::VectorXd& targets,
                   const Eigen::VectorXd& lambda, double noise, Eigen::VectorXd* grad = nullptr);

/// Per-objective Gram matrices over `inputs` with each surrogate's fitted
/// (frozen) hyperparameters.
std::vector<Eigen::MatrixXd> surrogate_grams(const std::vector<InputVector>& inputs,
                                             const std::vector<gp::GaussianSurrogate>& gps);

/// Hypervolume contributions of every evaluated output, standardized to
/// zero mean and unit variance (left centered when constant).
Eigen::VectorXd hvc_targets(const std::vector<ObjectiveVector>& outputs, const ReferencePoint& r);

/// Fit the mixing weights by maximizing the marginal likelihood of the
/// standardized hypervolume contributions of `outputs` at `inputs`.
/// `inputs` must be on the same scale the surrogates were trained on.
KernelWeights fit_lambda(const std::vector<InputVector>& inputs,
                         const std::vector<ObjectiveVector>& outputs,
                         const std::vector<gp::GaussianSurrogate>& gps, const ReferencePoint& r,
                         const LambdaFitOptions& opts = {});

inline constexpr double kDppJitter = 1e-6;

/// sum_i lambda_i k_i(x_a, x_b) over the candidates, plus `jitter` on the diagonal.
Eigen::MatrixXd build_dpp_kernel(const std::vector<InputVector>& candidates,
                                 const std::vector<gp::GaussianSurrogate>& gps,
                                 const Eigen::VectorXd& lambda, double jitter = kDppJitter);

/// Greedy log-determinant maximization: repeatedly add the candidate with the
/// largest marginal gain (lowest index on ties). Returns all indices when the
/// kernel has at most `batch_size` rows.
std::vector<std::size_t> dpp_select(const Eigen::MatrixXd& kernel, std::size_t batch_size);

} // namespace pdbo::dpp

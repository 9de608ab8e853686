#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "pdbo/core.hpp"

namespace pdbo::gp {

/// Anisotropic Matern-5/2 hyperparameters. The noise level is fixed.
struct KernelHyperparams {
    static constexpr double kMinScale = 0.031622776601683794; // sqrt(1e-3)
    static constexpr double kMaxScale = 31.622776601683793;   // sqrt(1e3)
    static constexpr double kNoiseStd = 1e-2;

    Eigen::VectorXd lengthscales;
    double signal_std = 1.0;
    double noise_std = kNoiseStd;

    /// Initial values: unit lengthscales and unit signal std.
    static KernelHyperparams initial(std::size_t d);

    std::size_t dim() const { return static_cast<std::size_t>(lengthscales.size()); }
    /// Throws ParameterError on non-positive scales.
    void validate() const;
};

/// sigma_f^2 (1 + sqrt5 r + 5 r^2 / 3) exp(-sqrt5 r), r the lengthscale-weighted distance.
double matern52(const InputVector& a, const InputVector& b, const KernelHyperparams& h);

/// Kernel Gram matrix over the rows of `x` (no noise term).
Eigen::MatrixXd gram(const Eigen::MatrixXd& x, const KernelHyperparams& h);
/// Cross-covariance between rows of `a` and rows of `b`.
Eigen::MatrixXd cross_gram(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                           const KernelHyperparams& h);

/// Stack inputs as the rows of a matrix.
Eigen::MatrixXd stack_rows(const std::vector<InputVector>& xs);

struct LmlValue {
    double value = 0.0;
    /// d(LML)/d(log lengthscale_k) for each k, then d(LML)/d(log sigma_f).
    Eigen::VectorXd grad;
};

/// Log marginal likelihood of targets `y` (already standardized) under a
/// zero-mean GP with kernel `h` plus noise_std^2 + jitter on the diagonal.
/// Throws NumericalError if the covariance is not positive definite.
LmlValue log_marginal_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                 const KernelHyperparams& h, double jitter = 0.0,
                                 bool with_grad = true);

struct Prediction {
    double mean = 0.0;
    double std = 0.0;
};

struct FitOptions {
    int starts = 5;
    std::uint64_t seed = 0;
    /// Skip hyperparameter search and condition on `initial_hyperparams`.
    bool optimize = true;
};

class SampledFunction;

/// One GP per objective: standardized outputs, Cholesky factor of K + noise.
/// Immutable after fitting and safe for concurrent prediction.
class GaussianSurrogate {
public:
    /// Fit hyperparameters by multi-start maximization of the marginal
    /// likelihood within the box [kMinScale, kMaxScale], then condition.
    static GaussianSurrogate fit(const std::vector<InputVector>& inputs,
                                 const Eigen::VectorXd& outputs, const FitOptions& opts = {});

    /// Condition on data with the given hyperparameters (no search).
    static GaussianSurrogate condition(const std::vector<InputVector>& inputs,
                                       const Eigen::VectorXd& outputs,
                                       const KernelHyperparams& h);

    /// Destandardized posterior mean and latent-function standard deviation.
    Prediction predict(const InputVector& x) const;
    double predict_mean(const InputVector& x) const;

    const KernelHyperparams& hyperparams() const { return hyp_; }
    const Eigen::MatrixXd& train_inputs() const { return x_; }
    const Eigen::VectorXd& train_outputs_standardized() const { return y_; }
    double output_mean() const { return y_mean_; }
    double output_std() const { return y_std_; }
    double jitter() const { return jitter_; }
    const Eigen::MatrixXd& chol() const { return chol_; }
    const Eigen::VectorXd& alpha() const { return alpha_; }
    std::size_t input_dim() const { return static_cast<std::size_t>(x_.cols()); }
    std::size_t size() const { return static_cast<std::size_t>(x_.rows()); }

    /// Log marginal likelihood at the fitted hyperparameters.
    double lml() const;

    double standardize(double y) const { return (y - y_mean_) / y_std_; }
    double destandardize(double z) const { return y_mean_ + y_std_ * z; }

    /// Approximate posterior function sample: random Fourier features for
    /// the Matern-5/2 prior, conditioned on the data by a pathwise update.
    SampledFunction sample_function(int n_features, std::uint64_t seed) const;

private:
    GaussianSurrogate() = default;
    void factorize();

    KernelHyperparams hyp_;
    Eigen::MatrixXd x_;
    Eigen::VectorXd y_;
    double y_mean_ = 0.0;
    double y_std_ = 1.0;
    double jitter_ = 0.0;
    Eigen::MatrixXd chol_;
    Eigen::VectorXd alpha_;
};

/// Deterministic map InputVector -> real drawn (approximately) from a GP posterior.
class SampledFunction {
public:
    double operator()(const InputVector& x) const;

    const Eigen::MatrixXd& feature_frequencies() const { return freq_; }
    const Eigen::VectorXd& feature_phases() const { return phase_; }
    const Eigen::VectorXd& feature_weights() const { return weight_; }

private:
    friend class GaussianSurrogate;

    Eigen::MatrixXd freq_;
    Eigen::VectorXd phase_;
    Eigen::VectorXd weight_;
    double feature_scale_ = 0.0;
    KernelHyperparams hyp_;
    Eigen::MatrixXd train_x_;
    Eigen::VectorXd update_;
    double y_mean_ = 0.0;
    double y_std_ = 1.0;
};

} // namespace pdbo::gp

#include "pdbo/gp.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Cholesky>

#include "pdbo/optim.hpp"

namespace pdbo::gp {

namespace {

constexpr double kSqrt5 = 2.23606797749979;

inline double matern_from_r(double r, double sf2)
{
    const double s = kSqrt5 * r;
    return sf2 * (1.0 + s + s * s / 3.0) * std::exp(-s);
}

inline double scaled_distance(const double* a, const double* b, const double* inv_l, Eigen::Index d)
{
    double r2 = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
        const double t = (a[k] - b[k]) * inv_l[k];
        r2 += t * t;
    }
    return std::sqrt(r2);
}

// Cholesky of `k` with escalating diagonal jitter. Returns the jitter used.
double robust_cholesky(const Eigen::MatrixXd& k, Eigen::MatrixXd& l_out)
{
    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() == Eigen::Success) {
        l_out = llt.matrixL();
        return 0.0;
    }
    const Eigen::Index n = k.rows();
    for (double jitter = 1e-8; jitter <= 1e-4 * 1.0001; jitter *= 10.0) {
        Eigen::MatrixXd kj = k;
        kj.diagonal().array() += jitter;
        llt.compute(kj);
        if (llt.info() == Eigen::Success) {
            l_out = llt.matrixL();
            return jitter;
        }
    }
    throw NumericalError("Gram matrix of size " + std::to_string(n)
                         + " is not positive definite after jitter 1e-4");
}

KernelHyperparams from_log_params(const Eigen::VectorXd& theta)
{
    const Eigen::Index d = theta.size() - 1;
    KernelHyperparams h;
    h.lengthscales = theta.head(d).array().exp();
    h.signal_std = std::exp(theta[d]);
    return h;
}

} // namespace

KernelHyperparams KernelHyperparams::initial(std::size_t d)
{
    KernelHyperparams h;
    h.lengthscales = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(d));
    return h;
}

void KernelHyperparams::validate() const
{
    if (lengthscales.size() == 0)
        throw ParameterError("kernel: empty lengthscale vector");
    for (Eigen::Index i = 0; i < lengthscales.size(); ++i)
        if (!(lengthscales[i] > 0.0) || !std::isfinite(lengthscales[i]))
            throw ParameterError("kernel: lengthscale " + std::to_string(i) + " must be positive");
    if (!(signal_std > 0.0))
        throw ParameterError("kernel: signal std must be positive");
    if (!(noise_std > 0.0))
        throw ParameterError("kernel: noise std must be positive");
}

double matern52(const InputVector& a, const InputVector& b, const KernelHyperparams& h)
{
    h.validate();
    if (a.size() != b.size() || a.size() != h.lengthscales.size())
        throw DimensionError("matern52: dimension mismatch");
    const Eigen::VectorXd inv_l = h.lengthscales.cwiseInverse();
    const double r = scaled_distance(a.data(), b.data(), inv_l.data(), a.size());
    return matern_from_r(r, h.signal_std * h.signal_std);
}

Eigen::MatrixXd stack_rows(const std::vector<InputVector>& xs)
{
    if (xs.empty())
        return {};
    Eigen::MatrixXd m(static_cast<Eigen::Index>(xs.size()), xs.front().size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i].size() != m.cols())
            throw DimensionError("stack_rows: ragged input vectors");
        m.row(static_cast<Eigen::Index>(i)) = xs[i].transpose();
    }
    return m;
}

Eigen::MatrixXd cross_gram(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                           const KernelHyperparams& h)
{
    if (a.cols() != b.cols() || a.cols() != h.lengthscales.size())
        throw DimensionError("cross_gram: dimension mismatch");
    const Eigen::Index d = a.cols();
    const double sf2 = h.signal_std * h.signal_std;
    const Eigen::RowVectorXd inv_l = h.lengthscales.cwiseInverse().transpose();
    const Eigen::MatrixXd as = a.array().rowwise() * inv_l.array();
    const Eigen::MatrixXd bs = b.array().rowwise() * inv_l.array();
    Eigen::MatrixXd k(a.rows(), b.rows());
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            double r2 = 0.0;
            for (Eigen::Index c = 0; c < d; ++c) {
                const double t = as(i, c) - bs(j, c);
                r2 += t * t;
            }
            k(i, j) = matern_from_r(std::sqrt(r2), sf2);
        }
    }
    return k;
}

Eigen::MatrixXd gram(const Eigen::MatrixXd& x, const KernelHyperparams& h)
{
    Eigen::MatrixXd k = cross_gram(x, x, h);
    // Exact symmetry regardless of floating-point evaluation order.
    return 0.5 * (k + k.transpose());
}

LmlValue log_marginal_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                 const KernelHyperparams& h, double jitter, bool with_grad)
{
    const Eigen::Index n = x.rows();
    const Eigen::Index d = x.cols();
    Eigen::MatrixXd k = gram(x, h);
    k.diagonal().array() += h.noise_std * h.noise_std + jitter;

    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() != Eigen::Success)
        throw NumericalError("log_marginal_likelihood: covariance not positive definite");
    const Eigen::VectorXd alpha = llt.solve(y);
    const Eigen::MatrixXd l = llt.matrixL();

    LmlValue out;
    out.value = -0.5 * y.dot(alpha) - l.diagonal().array().log().sum()
                - 0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
    if (!with_grad)
        return out;

    // dLML/dtheta = 0.5 tr((alpha alpha^T - K^-1) dK/dtheta)
    const Eigen::MatrixXd kinv = llt.solve(Eigen::MatrixXd::Identity(n, n));
    const Eigen::MatrixXd w = alpha * alpha.transpose() - kinv;

    const double sf2 = h.signal_std * h.signal_std;
    const Eigen::VectorXd inv_l = h.lengthscales.cwiseInverse();
    out.grad = Eigen::VectorXd::Zero(d + 1);
    Eigen::VectorXd t2(d);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index c = 0; c < d; ++c) {
                const double t = (x(i, c) - x(j, c)) * inv_l[c];
                t2[c] = t * t;
            }
            const double r = std::sqrt(t2.sum());
            const double s = kSqrt5 * r;
            // dk/dlog(l_c) = sf2 (5/3) (1 + sqrt5 r) exp(-sqrt5 r) (dx_c / l_c)^2
            const double common = sf2 * (5.0 / 3.0) * (1.0 + s) * std::exp(-s);
            const double half_w = 0.5 * w(i, j);
            out.grad.head(d) += (half_w * common) * t2;
            out.grad[d] += half_w * 2.0 * matern_from_r(r, sf2);
        }
    }
    return out;
}

void GaussianSurrogate::factorize()
{
    Eigen::MatrixXd k = gram(x_, hyp_);
    k.diagonal().array() += hyp_.noise_std * hyp_.noise_std;
    jitter_ = robust_cholesky(k, chol_);
    alpha_ = chol_.triangularView<Eigen::Lower>().solve(y_);
    chol_.triangularView<Eigen::Lower>().transpose().solveInPlace(alpha_);
}

GaussianSurrogate GaussianSurrogate::condition(const std::vector<InputVector>& inputs,
                                               const Eigen::VectorXd& outputs,
                                               const KernelHyperparams& h)
{
    if (inputs.size() < 2)
        throw ParameterError("GP fit needs at least 2 training points");
    if (static_cast<std::size_t>(outputs.size()) != inputs.size())
        throw DimensionError("GP fit: inputs and outputs differ in length");
    if (!outputs.allFinite())
        throw ParameterError("GP fit: non-finite output");
    h.validate();

    GaussianSurrogate gp;
    gp.x_ = stack_rows(inputs);
    if (static_cast<std::size_t>(gp.x_.cols()) != h.dim())
        throw DimensionError("GP fit: hyperparameter dimension mismatch");
    gp.hyp_ = h;
    const double n = static_cast<double>(outputs.size());
    gp.y_mean_ = outputs.mean();
    const double var = (outputs.array() - gp.y_mean_).square().sum() / n;
    gp.y_std_ = var > 1e-24 ? std::sqrt(var) : 1.0;
    gp.y_ = (outputs.array() - gp.y_mean_) / gp.y_std_;
    gp.factorize();
    return gp;
}

GaussianSurrogate GaussianSurrogate::fit(const std::vector<InputVector>& inputs,
                                         const Eigen::VectorXd& outputs, const FitOptions& opts)
{
    if (inputs.empty())
        throw ParameterError("GP fit needs at least 2 training points");
    const std::size_t d = static_cast<std::size_t>(inputs.front().size());
    GaussianSurrogate base = condition(inputs, outputs, KernelHyperparams::initial(d));
    if (!opts.optimize)
        return base;

    const Eigen::MatrixXd& x = base.x_;
    const Eigen::VectorXd& y = base.y_;
    const auto p = static_cast<Eigen::Index>(d + 1);
    const double lo = std::log(KernelHyperparams::kMinScale);
    const double hi = std::log(KernelHyperparams::kMaxScale);

    // Box constraints via theta = lo + (hi - lo) * sigmoid(u).
    auto to_theta = [&](const Eigen::VectorXd& u) {
        return Eigen::VectorXd((lo + (hi - lo) / (1.0 + (-u.array()).exp())).matrix());
    };
    auto to_u = [&](const Eigen::VectorXd& theta) {
        Eigen::ArrayXd s = (theta.array() - lo) / (hi - lo);
        s = s.max(1e-9).min(1.0 - 1e-9);
        return Eigen::VectorXd((s / (1.0 - s)).log().matrix());
    };
    const optim::Objective objective = [&](const Eigen::VectorXd& u, Eigen::VectorXd& grad) {
        const Eigen::VectorXd theta = to_theta(u);
        LmlValue v;
        try {
            v = log_marginal_likelihood(x, y, from_log_params(theta), base.jitter_);
        } catch (const NumericalError&) {
            grad = Eigen::VectorXd::Zero(u.size());
            return std::numeric_limits<double>::infinity();
        }
        const Eigen::ArrayXd sig = (theta.array() - lo) / (hi - lo);
        grad = (-v.grad.array() * (hi - lo) * sig * (1.0 - sig)).matrix();
        return -v.value;
    };

    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unif(lo, hi);
    Eigen::VectorXd best_theta = Eigen::VectorXd::Zero(p);
    double best = std::numeric_limits<double>::infinity();
    {
        Eigen::VectorXd g;
        best = objective(to_u(best_theta), g);
    }
    for (int s = 0; s < std::max(1, opts.starts); ++s) {
        Eigen::VectorXd theta0(p);
        if (s == 0) {
            theta0.setZero();
        } else {
            for (Eigen::Index i = 0; i < p; ++i)
                theta0[i] = unif(rng);
        }
        optim::LbfgsOptions lo_opts;
        lo_opts.max_iterations = 100;
        lo_opts.grad_tolerance = 1e-5;
        const auto res = optim::minimize(objective, to_u(theta0), lo_opts);
        if (res.value < best) {
            best = res.value;
            best_theta = to_theta(res.x);
        }
    }

    GaussianSurrogate gp = base;
    gp.hyp_ = from_log_params(best_theta);
    gp.factorize();
    return gp;
}

double GaussianSurrogate::lml() const
{
    return log_marginal_likelihood(x_, y_, hyp_, jitter_, false).value;
}

Prediction GaussianSurrogate::predict(const InputVector& x) const
{
    const Eigen::Index n = x_.rows();
    const Eigen::Index d = x_.cols();
    if (x.size() != d)
        throw DimensionError("predict: input dimension mismatch");
    const double sf2 = hyp_.signal_std * hyp_.signal_std;
    Eigen::VectorXd kx(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double r2 = 0.0;
        for (Eigen::Index c = 0; c < d; ++c) {
            const double t = (x_(i, c) - x[c]) / hyp_.lengthscales[c];
            r2 += t * t;
        }
        kx[i] = matern_from_r(std::sqrt(r2), sf2);
    }
    const double mean_std = kx.dot(alpha_);
    chol_.triangularView<Eigen::Lower>().solveInPlace(kx);
    const double var = std::max(0.0, sf2 - kx.squaredNorm());
    return {destandardize(mean_std), std::sqrt(var) * y_std_};
}

double GaussianSurrogate::predict_mean(const InputVector& x) const
{
    const Eigen::Index n = x_.rows();
    const Eigen::Index d = x_.cols();
    if (x.size() != d)
        throw DimensionError("predict: input dimension mismatch");
    const double sf2 = hyp_.signal_std * hyp_.signal_std;
    double m = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double r2 = 0.0;
        for (Eigen::Index c = 0; c < d; ++c) {
            const double t = (x_(i, c) - x[c]) / hyp_.lengthscales[c];
            r2 += t * t;
        }
        m += matern_from_r(std::sqrt(r2), sf2) * alpha_[i];
    }
    return destandardize(m);
}

SampledFunction GaussianSurrogate::sample_function(int n_features, std::uint64_t seed) const
{
    if (n_features < 1)
        throw ParameterError("sample_function: n_features must be >= 1");
    const Eigen::Index d = x_.cols();
    const Eigen::Index n = x_.rows();
    const Eigen::Index m = n_features;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    // Matern-nu spectral density: multivariate Student-t with 2 nu = 5 dof.
    std::chi_squared_distribution<double> chi2(5.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

    SampledFunction f;
    f.freq_.resize(m, d);
    f.phase_.resize(m);
    f.weight_.resize(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const double scale = std::sqrt(5.0 / chi2(rng));
        for (Eigen::Index c = 0; c < d; ++c)
            f.freq_(j, c) = normal(rng) * scale / hyp_.lengthscales[c];
        f.phase_[j] = phase(rng);
    }
    for (Eigen::Index j = 0; j < m; ++j)
        f.weight_[j] = normal(rng);
    f.feature_scale_ = hyp_.signal_std * std::sqrt(2.0 / static_cast<double>(m));

    auto prior_at = [&](const double* row, Eigen::Index stride) {
        double s = 0.0;
        for (Eigen::Index j = 0; j < m; ++j) {
            double arg = f.phase_[j];
            for (Eigen::Index c = 0; c < d; ++c)
                arg += f.freq_(j, c) * row[c * stride];
            s += f.weight_[j] * std::cos(arg);
        }
        return f.feature_scale_ * s;
    };

    // Pathwise conditioning: f = prior + k(., X) (K + s^2 I)^-1 (y - prior(X) - eps).
    const double noise_sd = std::sqrt(hyp_.noise_std * hyp_.noise_std + jitter_);
    Eigen::VectorXd resid(n);
    for (Eigen::Index i = 0; i < n; ++i)
        resid[i] = y_[i] - prior_at(&x_(i, 0), x_.rows()) - noise_sd * normal(rng);
    chol_.triangularView<Eigen::Lower>().solveInPlace(resid);
    chol_.triangularView<Eigen::Lower>().transpose().solveInPlace(resid);

    f.hyp_ = hyp_;
    f.train_x_ = x_;
    f.update_ = std::move(resid);
    f.y_mean_ = y_mean_;
    f.y_std_ = y_std_;
    return f;
}

double SampledFunction::operator()(const InputVector& x) const
{
    const Eigen::Index d = freq_.cols();
    if (x.size() != d)
        throw DimensionError("SampledFunction: input dimension mismatch");
    double prior = 0.0;
    for (Eigen::Index j = 0; j < freq_.rows(); ++j) {
        double arg = phase_[j];
        for (Eigen::Index c = 0; c < d; ++c)
            arg += freq_(j, c) * x[c];
        prior += weight_[j] * std::cos(arg);
    }
    prior *= feature_scale_;

    const double sf2 = hyp_.signal_std * hyp_.signal_std;
    double update = 0.0;
    for (Eigen::Index i = 0; i < train_x_.rows(); ++i) {
        double r2 = 0.0;
        for (Eigen::Index c = 0; c < d; ++c) {
            const double t = (train_x_(i, c) - x[c]) / hyp_.lengthscales[c];
            r2 += t * t;
        }
        update += matern_from_r(std::sqrt(r2), sf2) * update_[i];
    }
    return y_mean_ + y_std_ * (prior + update);
}

} // namespace pdbo::gp

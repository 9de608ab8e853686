#include "pdbo/dpp.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Cholesky>

#include "pdbo/optim.hpp"

namespace pdbo::dpp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Eigen::VectorXd softmax_vec(const Eigen::VectorXd& u)
{
    const double top = u.maxCoeff();
    Eigen::VectorXd e = (u.array() - top).exp();
    return e / e.sum();
}

} // namespace

double mixture_lml(const std::vector<Eigen::MatrixXd>& grams, const Eigen::VectorXd& targets,
                   const Eigen::VectorXd& lambda, double noise, Eigen::VectorXd* grad)
{
    const Eigen::Index n = targets.size();
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < grams.size(); ++i)
        k += lambda[static_cast<Eigen::Index>(i)] * grams[i];
    k.diagonal().array() += noise;

    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() != Eigen::Success)
        return kNegInf;
    const Eigen::VectorXd alpha = llt.solve(targets);
    const Eigen::MatrixXd l = llt.matrixL();
    const double value = -0.5 * targets.dot(alpha) - l.diagonal().array().log().sum()
                         - 0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
    if (grad) {
        const Eigen::MatrixXd w = alpha * alpha.transpose() - llt.solve(Eigen::MatrixXd::Identity(n, n));
        grad->resize(static_cast<Eigen::Index>(grams.size()));
        for (std::size_t i = 0; i < grams.size(); ++i)
            (*grad)[static_cast<Eigen::Index>(i)] = 0.5 * (w.array() * grams[i].array()).sum();
    }
    return value;
}

std::vector<Eigen::MatrixXd> surrogate_grams(const std::vector<InputVector>& inputs,
                                             const std::vector<gp::GaussianSurrogate>& gps)
{
    const Eigen::MatrixXd x = gp::stack_rows(inputs);
    std::vector<Eigen::MatrixXd> grams;
    grams.reserve(gps.size());
    for (const auto& g : gps)
        grams.push_back(gp::gram(x, g.hyperparams()));
    return grams;
}

Eigen::VectorXd hvc_targets(const std::vector<ObjectiveVector>& outputs, const ReferencePoint& r)
{
    const auto c = metrics::hvc(outputs, r);
    Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
    const double mean = t.mean();
    t.array() -= mean;
    const double sd = std::sqrt(t.squaredNorm() / static_cast<double>(t.size()));
    if (sd > 1e-300)
        t /= sd;
    return t;
}

KernelWeights fit_lambda(const std::vector<InputVector>& inputs,
                         const std::vector<ObjectiveVector>& outputs,
                         const std::vector<gp::GaussianSurrogate>& gps, const ReferencePoint& r,
                         const LambdaFitOptions& opts)
{
    const auto k = static_cast<Eigen::Index>(gps.size());
    if (k == 0)
        throw ParameterError("fit_lambda: no surrogates");
    if (inputs.size() != outputs.size())
        throw DimensionError("fit_lambda: inputs and outputs differ in length");
    if (inputs.size() < 2)
        throw ParameterError("fit_lambda: need at least 2 evaluated points");

    KernelWeights out;
    if (k == 1) {
        out.lambda = Eigen::VectorXd::Ones(1);
        return out;
    }

    const auto grams = surrogate_grams(inputs, gps);
    const Eigen::VectorXd targets = hvc_targets(outputs, r);

    const optim::Objective objective = [&](const Eigen::VectorXd& u, Eigen::VectorXd& grad) {
        const Eigen::VectorXd lam = softmax_vec(u);
        Eigen::VectorXd g_lam;
        const double v = mixture_lml(grams, targets, lam, opts.noise, &g_lam);
        if (!std::isfinite(v)) {
            grad = Eigen::VectorXd::Zero(u.size());
            return std::numeric_limits<double>::infinity();
        }
        // d lambda_i / d u_j = lambda_i (delta_ij - lambda_j)
        grad = -(lam.array() * (g_lam.array() - lam.dot(g_lam))).matrix();
        return -v;
    };

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    double best = kNegInf;
    Eigen::VectorXd best_lambda;
    auto consider = [&](const Eigen::VectorXd& lam) {
        const double v = mixture_lml(grams, targets, lam, opts.noise);
        if (std::isfinite(v) && v > best) {
            best = v;
            best_lambda = lam;
        }
    };

    for (int s = 0; s < std::max(1, opts.starts); ++s) {
        Eigen::VectorXd u0 = Eigen::VectorXd::Zero(k);
        if (s > 0)
            for (Eigen::Index i = 0; i < k; ++i)
                u0[i] = 2.0 * normal(rng);
        optim::LbfgsOptions lo;
        lo.max_iterations = 200;
        lo.grad_tolerance = 1e-9;
        const auto res = optim::minimize(objective, u0, lo);
        if (std::isfinite(res.value))
            consider(softmax_vec(res.x));
    }
    // The softmax parameterization only reaches the simplex vertices in the
    // limit, so they are checked directly.
    for (Eigen::Index i = 0; i < k; ++i)
        consider(Eigen::VectorXd::Unit(k, i));

    if (!std::isfinite(best)) {
        out.lambda = Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k));
        out.fallback = true;
        return out;
    }
    // Project onto the simplex exactly (clip rounding noise, renormalize).
    out.lambda = best_lambda.cwiseMax(0.0).cwiseMin(1.0);
    out.lambda /= out.lambda.sum();
    return out;
}

Eigen::MatrixXd build_dpp_kernel(const std::vector<InputVector>& candidates,
                                 const std::vector<gp::GaussianSurrogate>& gps,
                                 const Eigen::VectorXd& lambda, double jitter)
{
    if (static_cast<std::size_t>(lambda.size()) != gps.size())
        throw DimensionError("build_dpp_kernel: one weight per surrogate required");
    if ((lambda.array() < -1e-12).any() || std::abs(lambda.sum() - 1.0) > 1e-8)
        throw ParameterError("build_dpp_kernel: weights must lie on the simplex");
    const auto n = static_cast<Eigen::Index>(candidates.size());
    Eigen::MatrixXd kmat = Eigen::MatrixXd::Zero(n, n);
    if (n == 0)
        return kmat;
    const Eigen::MatrixXd x = gp::stack_rows(candidates);
    for (std::size_t i = 0; i < gps.size(); ++i) {
        const double w = lambda[static_cast<Eigen::Index>(i)];
        if (w == 0.0)
            continue;
        kmat += w * gp::gram(x, gps[i].hyperparams());
    }
    kmat.diagonal().array() += jitter;
    return kmat;
}

std::vector<std::size_t> dpp_select(const Eigen::MatrixXd& kernel, std::size_t batch_size)
{
    const auto n = static_cast<std::size_t>(kernel.rows());
    if (kernel.rows() != kernel.cols())
        throw DimensionError("dpp_select: kernel must be square");
    if (batch_size == 0)
        throw ParameterError("dpp_select: batch size must be >= 1");
    std::vector<std::size_t> selected;
    if (n <= batch_size) {
        for (std::size_t i = 0; i < n; ++i)
            selected.push_back(i);
        return selected;
    }

    // Incremental Cholesky: gain[i] is the Schur complement of item i given
    // the selected set, i.e. the factor by which det grows if i is added.
    Eigen::VectorXd gain = kernel.diagonal();
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(batch_size), static_cast<Eigen::Index>(n));
    std::vector<bool> taken(n, false);

    auto argmax_gain = [&]() {
        std::size_t best = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (taken[i])
                continue;
            if (best == n || gain[static_cast<Eigen::Index>(i)] > gain[static_cast<Eigen::Index>(best)])
                best = i;
        }
        return best;
    };

    std::size_t j = argmax_gain();
    while (true) {
        const auto jj = static_cast<Eigen::Index>(j);
        const auto step = static_cast<Eigen::Index>(selected.size());
        selected.push_back(j);
        taken[j] = true;
        if (selected.size() == batch_size)
            break;
        const double dj = std::sqrt(std::max(gain[jj], 1e-300));
        for (std::size_t i = 0; i < n; ++i) {
            if (taken[i])
                continue;
            const auto ii = static_cast<Eigen::Index>(i);
            const double e = (kernel(jj, ii) - c.col(jj).head(step).dot(c.col(ii).head(step))) / dj;
            c(step, ii) = e;
            gain[ii] -= e * e;
        }
        j = argmax_gain();
    }
    return selected;
}

} // namespace pdbo::dpp

#include <doctest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "pdbo/gp.hpp"

using namespace pdbo;
using namespace pdbo::gp;

namespace {

std::vector<InputVector> random_inputs(std::mt19937_64& rng, int n, int d)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<InputVector> xs;
    for (int i = 0; i < n; ++i) {
        InputVector x(d);
        for (int j = 0; j < d; ++j)
            x[j] = u(rng);
        xs.push_back(x);
    }
    return xs;
}

KernelHyperparams random_hyp(std::mt19937_64& rng, int d)
{
    std::uniform_real_distribution<double> u(-1.5, 1.0);
    KernelHyperparams h = KernelHyperparams::initial(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j)
        h.lengthscales[j] = std::exp(u(rng));
    h.signal_std = std::exp(u(rng));
    return h;
}

Eigen::VectorXd standardized(const Eigen::VectorXd& y)
{
    const double m = y.mean();
    const double s = std::sqrt((y.array() - m).square().mean());
    return (y.array() - m) / s;
}

} // namespace

TEST_CASE("matern52 closed form")
{
    KernelHyperparams h = KernelHyperparams::initial(1);
    const Eigen::VectorXd a = Eigen::VectorXd::Zero(1);
    const Eigen::VectorXd b = Eigen::VectorXd::Ones(1);
    CHECK(matern52(a, b, h) == doctest::Approx(0.5239941088318203).epsilon(1e-12));
    CHECK(matern52(a, a, h) == 1.0);
    h.signal_std = 2.0;
    CHECK(matern52(b, b, h) == doctest::Approx(4.0));
    CHECK(matern52(a, Eigen::VectorXd::Constant(1, 1e3), h) < 1e-100);
    h.lengthscales[0] = -1.0;
    CHECK_THROWS_AS(matern52(a, b, h), ParameterError);
}

TEST_CASE("gram is symmetric PSD and matches the oracle")
{
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const auto xs = random_inputs(rng, 12, 3);
        const auto h = random_hyp(rng, 3);
        const Eigen::MatrixXd k = gram(stack_rows(xs), h);
        CHECK((k - k.transpose()).norm() == 0.0);
        CHECK((k - oracle::matern_gram(xs, h.lengthscales, h.signal_std)).norm() < 1e-12);
        const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(k).eigenvalues().minCoeff();
        CHECK(min_eig >= -1e-8 * k.trace());
    }
}

TEST_CASE("LML value matches a dense LU computation")
{
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n01;
    for (int trial = 0; trial < 20; ++trial) {
        const auto xs = random_inputs(rng, 6, 2);
        const auto h = random_hyp(rng, 2);
        Eigen::VectorXd y(6);
        for (int i = 0; i < 6; ++i)
            y[i] = n01(rng);
        Eigen::MatrixXd k = oracle::matern_gram(xs, h.lengthscales, h.signal_std);
        k.diagonal().array() += h.noise_std * h.noise_std;
        const double ref = oracle::gaussian_log_likelihood(k, y);
        CHECK(log_marginal_likelihood(stack_rows(xs), y, h).value == doctest::Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("LML gradient matches central differences")
{
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n01;
    for (int trial = 0; trial < 30; ++trial) {
        const int d = 1 + trial % 3;
        const auto xs = random_inputs(rng, 5, d);
        const Eigen::MatrixXd x = stack_rows(xs);
        const auto h = random_hyp(rng, d);
        Eigen::VectorXd y(5);
        for (int i = 0; i < 5; ++i)
            y[i] = n01(rng);
        const auto g = log_marginal_likelihood(x, y, h).grad;
        REQUIRE(g.size() == d + 1);
        const double step = 1e-5;
        for (int p = 0; p <= d; ++p) {
            auto shifted = [&](double delta) {
                KernelHyperparams q = h;
                if (p < d)
                    q.lengthscales[p] *= std::exp(delta);
                else
                    q.signal_std *= std::exp(delta);
                return log_marginal_likelihood(x, y, q, 0.0, false).value;
            };
            const double fd = (shifted(step) - shifted(-step)) / (2.0 * step);
            CHECK(std::abs(g[p] - fd) <= 1e-4 * std::max(1.0, std::abs(fd)));
        }
    }
}

TEST_CASE("fit improves the marginal likelihood and respects bounds")
{
    std::vector<InputVector> xs;
    Eigen::VectorXd y(5);
    for (int i = 0; i < 5; ++i) {
        xs.push_back(Eigen::VectorXd::Constant(1, i / 4.0));
        y[i] = std::sin(3.0 * i / 4.0);
    }
    const auto gp = GaussianSurrogate::fit(xs, y);
    const double initial = log_marginal_likelihood(stack_rows(xs), standardized(y), KernelHyperparams::initial(1)).value;
    CHECK(gp.lml() >= initial - 1e-9);
    const auto& h = gp.hyperparams();
    CHECK(h.lengthscales[0] >= KernelHyperparams::kMinScale - 1e-12);
    CHECK(h.lengthscales[0] <= KernelHyperparams::kMaxScale + 1e-12);
    CHECK(h.signal_std >= KernelHyperparams::kMinScale - 1e-12);
    CHECK(h.signal_std <= KernelHyperparams::kMaxScale + 1e-12);
    CHECK(h.noise_std == KernelHyperparams::kNoiseStd);
    CHECK(gp.output_std() > 0.0);

    // Cholesky reconstructs the Gram matrix plus noise.
    Eigen::MatrixXd k = gram(gp.train_inputs(), h);
    k.diagonal().array() += h.noise_std * h.noise_std + gp.jitter();
    const Eigen::MatrixXd l = gp.chol();
    CHECK((l * l.transpose() - k).norm() <= 1e-8 * k.norm());
}

TEST_CASE("fit edge cases")
{
    std::vector<InputVector> twin{Eigen::Vector2d(0.3, 0.3), Eigen::Vector2d(0.3, 0.3)};
    CHECK_NOTHROW(GaussianSurrogate::fit(twin, Eigen::Vector2d(0.0, 1.0)));

    std::mt19937_64 rng(4);
    const auto xs = random_inputs(rng, 6, 2);
    const auto flat = GaussianSurrogate::fit(xs, Eigen::VectorXd::Constant(6, 3.5));
    for (const auto& x : random_inputs(rng, 10, 2))
        CHECK(std::abs(flat.predict(x).mean - 3.5) < 1e-6);

    CHECK_THROWS_AS(GaussianSurrogate::fit({xs[0]}, Eigen::VectorXd::Ones(1)), ParameterError);
    CHECK_THROWS_AS(GaussianSurrogate::fit(xs, Eigen::VectorXd::Ones(5)), DimensionError);
}

TEST_CASE("prediction matches a dense solve")
{
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n01;
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 1 + trial % 3;
        const int n = 3 + trial % 5;
        const auto xs = random_inputs(rng, n, d);
        Eigen::VectorXd y(n);
        for (int i = 0; i < n; ++i)
            y[i] = 10.0 * n01(rng) + 4.0;
        const auto h = random_hyp(rng, d);
        const auto gp = GaussianSurrogate::condition(xs, y, h);
        const double diag = h.noise_std * h.noise_std + gp.jitter();
        for (const auto& x : random_inputs(rng, 5, d)) {
            const auto p = gp.predict(x);
            const auto ref = oracle::dense_gp_predict(xs, y, h.lengthscales, h.signal_std, diag, x);
            CHECK(std::abs(p.mean - ref.mean) < 1e-8);
            CHECK(std::abs(p.std - ref.std) < 1e-8);
            CHECK(std::abs(gp.predict_mean(x) - p.mean) <= 1e-10 * std::max(1.0, std::abs(p.mean)));
        }
    }
}

TEST_CASE("prediction near data and far from data")
{
    std::mt19937_64 rng(6);
    const auto xs = random_inputs(rng, 8, 2);
    Eigen::VectorXd y(8);
    for (int i = 0; i < 8; ++i)
        y[i] = xs[static_cast<std::size_t>(i)].sum() * 5.0;
    const auto gp = GaussianSurrogate::fit(xs, y);
    for (int i = 0; i < 8; ++i)
        CHECK(std::abs(gp.predict(xs[static_cast<std::size_t>(i)]).mean - y[i])
              <= 3.0 * KernelHyperparams::kNoiseStd * gp.output_std());
    const auto far = gp.predict(Eigen::Vector2d(1e4, -1e4));
    CHECK(far.mean == doctest::Approx(gp.output_mean()).epsilon(1e-9));
    CHECK(far.std == doctest::Approx(gp.hyperparams().signal_std * gp.output_std()).epsilon(1e-9));
    CHECK(gp.destandardize(gp.standardize(7.25)) == doctest::Approx(7.25).epsilon(1e-12));
}

TEST_CASE("Thompson samples are deterministic and centred on the posterior")
{
    std::mt19937_64 rng(7);
    const auto xs = random_inputs(rng, 6, 2);
    Eigen::VectorXd y(6);
    for (int i = 0; i < 6; ++i)
        y[i] = std::cos(4.0 * xs[static_cast<std::size_t>(i)][0]) + xs[static_cast<std::size_t>(i)][1];
    const auto gp = GaussianSurrogate::fit(xs, y);

    const auto f = gp.sample_function(500, 42);
    const Eigen::Vector2d x(0.37, 0.61);
    CHECK(f(x) == f(x));
    CHECK(gp.sample_function(500, 42)(x) == f(x));
    CHECK(gp.sample_function(500, 43)(x) != f(x));
    CHECK(f.feature_frequencies().rows() == 500);

    const auto post = gp.predict(x);
    double s = 0.0;
    for (int seed = 0; seed < 500; ++seed)
        s += gp.sample_function(500, static_cast<std::uint64_t>(seed))(x);
    CHECK(std::abs(s / 500.0 - post.mean) <= 3.0 * post.std / std::sqrt(500.0));

    // Near a training input the sample tracks the observation.
    CHECK(std::abs(f(xs[0]) - y[0]) < 0.1 * gp.output_std());
}

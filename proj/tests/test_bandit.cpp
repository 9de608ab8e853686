#include <doctest.h>

#include <cmath>
#include <random>

#include "pdbo/bandit.hpp"

using namespace pdbo;
using namespace pdbo::bandit;

namespace {

double sum(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v)
        s += x;
    return s;
}

std::vector<gp::GaussianSurrogate> constant_gps(double c)
{
    std::vector<InputVector> xs{Eigen::Vector2d(0.1, 0.2), Eigen::Vector2d(0.8, 0.5), Eigen::Vector2d(0.4, 0.9)};
    const Eigen::VectorXd y = Eigen::VectorXd::Constant(3, c);
    return {gp::GaussianSurrogate::fit(xs, y), gp::GaussianSurrogate::fit(xs, y)};
}

} // namespace

TEST_CASE("discounted cumulative reward")
{
    BanditState s(1, {0.7, 4.0, true});
    s.update({1.0});
    s.update({1.0});
    CHECK(s.cumulative()[0] == doctest::Approx(1.7));

    BanditState plain(2, {1.0, 4.0, false});
    double expect = 0.0;
    for (int t = 1; t <= 10; ++t) {
        plain.update({0.1 * t, 0.0});
        expect += 0.1 * t;
    }
    CHECK(plain.cumulative()[0] == doctest::Approx(expect));
}

TEST_CASE("softmax values")
{
    const auto p = softmax({0.0, -1.0}, 4.0);
    CHECK(p[0] == doctest::Approx(1.0 / (1.0 + std::exp(-4.0))).epsilon(1e-12));
    CHECK(p[0] == doctest::Approx(0.98201).epsilon(1e-5));
    const auto big = softmax({1000.0, 999.0, -1e6}, 4.0);
    CHECK(std::isfinite(big[0]));
    CHECK(sum(big) == doctest::Approx(1.0));
}

TEST_CASE("cold start and symmetric histories are uniform")
{
    BanditState s(4);
    for (double p : s.probabilities())
        CHECK(p == 0.25);
    s.update({0.0, 0.0, 0.0, 0.0});
    for (double p : s.probabilities())
        CHECK(p == doctest::Approx(0.25));
    s.update({0.3, 0.3, 0.3, 0.3});
    s.update({0.1, 0.1, 0.1, 0.1});
    for (double p : s.probabilities())
        CHECK(p == doctest::Approx(0.25));
}

TEST_CASE("normalization invariants on random reward streams")
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        BanditState s(3);
        for (int t = 0; t < 15; ++t) {
            s.update({u(rng), u(rng), u(rng)});
            CHECK(std::abs(sum(s.probabilities()) - 1.0) <= 1e-12);
            std::size_t best_r = 0, best_p = 0;
            for (std::size_t j = 0; j < 3; ++j) {
                const double g = s.cumulative()[j], r = s.normalized()[j];
                CHECK(s.probabilities()[j] > 0.0);
                CHECK(g <= s.g_max()[j]);
                CHECK(g >= s.g_min()[j]);
                CHECK(r <= 0.0);
                CHECK(r >= -1.0);
                if (g == s.g_max()[j])
                    CHECK(r == 0.0);
                if (g == s.g_min()[j] && s.g_max()[j] > s.g_min()[j])
                    CHECK(r == -1.0);
                if (r > s.normalized()[best_r])
                    best_r = j;
                if (s.probabilities()[j] > s.probabilities()[best_p])
                    best_p = j;
            }
            CHECK(s.normalized()[best_p] == s.normalized()[best_r]);
        }
    }
}

TEST_CASE("rigged portfolio concentrates on the dominant arm")
{
    BanditState s(4);
    bool reached = false;
    for (int t = 1; t <= 30 && !reached; ++t) {
        const double weak = 0.5 * std::pow(0.9, t);
        s.update({1.0, weak, weak, weak});
        reached = s.probabilities()[0] > 0.8;
    }
    CHECK(reached);
}

TEST_CASE("select_arm draws from p")
{
    BanditState s(3);
    std::mt19937_64 a(7), b(7);
    for (int i = 0; i < 50; ++i)
        CHECK(s.select_arm(a) == s.select_arm(b));

    std::mt19937_64 rng(8);
    std::vector<int> counts(3, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i)
        ++counts[s.select_arm(rng)];
    const double sd = std::sqrt(n * (1.0 / 3.0) * (2.0 / 3.0));
    for (int c : counts)
        CHECK(std::abs(c - n / 3.0) <= 3.0 * sd);

    // Drive arm 0 to r = 0 and the others to r = -1 with a huge temperature.
    BanditState sharp(3, {0.7, 200.0, true});
    sharp.update({1.0, 1.0, 1.0});
    sharp.update({1.0, -5.0, -5.0});
    for (int i = 0; i < 100; ++i)
        CHECK(sharp.select_arm(rng) == 0);
}

TEST_CASE("config validation")
{
    CHECK_THROWS_AS(BanditState(0), ParameterError);
    CHECK_THROWS_AS(BanditState(2, {0.0, 4.0, true}), ParameterError);
    CHECK_THROWS_AS(BanditState(2, {0.7, -1.0, true}), ParameterError);
    BanditState s(2);
    CHECK_THROWS_AS(s.update({1.0}), DimensionError);
    CHECK(parse_reward_mode(to_string(RewardMode::SumPosteriorMean)) == RewardMode::SumPosteriorMean);
    CHECK_THROWS_AS(parse_reward_mode("hv"), LookupError);
}

TEST_CASE("immediate rewards")
{
    const auto gps = constant_gps(1.0); // every prediction is (1, 1)
    const ReferencePoint r{Eigen::Vector2d(3, 3)};
    PreviousNomination none;
    CHECK(compute_immediate_rewards(gps, none, 2, r, RewardMode::RelativeHv) == std::vector<double>{0.0, 0.0});

    PreviousNomination prev;
    prev.front = {Eigen::Vector2d(2, 2)};
    prev.front_hv = 1.0;
    prev.batches = {{Eigen::Vector2d(0.3, 0.3)}, {}};
    auto ir = compute_immediate_rewards(gps, prev, 2, r, RewardMode::RelativeHv);
    CHECK(ir[0] == doctest::Approx(3.0).epsilon(1e-5)); // (4 - 1) / 1
    CHECK(ir[1] == 0.0);

    prev.front = {Eigen::Vector2d(0.5, 0.5)};
    prev.front_hv = 6.25;
    ir = compute_immediate_rewards(gps, prev, 2, r, RewardMode::RelativeHv);
    CHECK(ir[0] == 0.0);

    prev.batches = {{Eigen::Vector2d(0.3, 0.3), Eigen::Vector2d(0.6, 0.2)}, {Eigen::Vector2d(0.1, 0.1)}};
    ir = compute_immediate_rewards(gps, prev, 2, r, RewardMode::SumPosteriorMean);
    CHECK(ir[0] == doctest::Approx(-4.0).epsilon(1e-5));
    CHECK(ir[1] == doctest::Approx(-2.0).epsilon(1e-5));
    CHECK_THROWS_AS(compute_immediate_rewards(gps, prev, 3, r, RewardMode::RelativeHv), DimensionError);
}

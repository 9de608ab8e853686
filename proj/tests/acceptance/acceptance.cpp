// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Pass criterion numbers as arguments to run
// a subset, e.g. `acceptance 1 5 10`.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pdbo/bandit.hpp"
#include "pdbo/benchmarks.hpp"
#include "pdbo/dpp.hpp"
#include "pdbo/driver.hpp"
#include "pdbo/gp.hpp"
#include "pdbo/metrics.hpp"
#include "pdbo/nsga2.hpp"

using namespace pdbo;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string format(const char* fmt, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

std::vector<Eigen::VectorXd> random_points(std::mt19937_64& rng, int n, int k)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Eigen::VectorXd> pts;
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd p(k);
        for (int j = 0; j < k; ++j)
            p[j] = u(rng);
        pts.push_back(p);
    }
    return pts;
}

// 1. Exact hypervolume against Monte-Carlo and, for K=2, the staircase sum.
Outcome hypervolume_oracle()
{
    const auto t0 = Clock::now();
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<int> size(1, 8);
    double worst_mc = 0.0, worst_stair = 0.0;
    int failures = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const int k = 2 + trial % 3;
        const auto pts = random_points(rng, size(rng), k);
        const Eigen::VectorXd r = Eigen::VectorXd::Constant(k, 1.1);
        const double hv = metrics::hypervolume(pts, {r});
        const double mc = oracle::monte_carlo_hv(pts, r, 1000000, rng);
        const double rel = std::abs(hv - mc) / mc;
        worst_mc = std::max(worst_mc, rel);
        failures += rel > 0.01 ? 1 : 0;
        if (k == 2) {
            const double err = std::abs(hv - oracle::staircase_hv(pts, r));
            worst_stair = std::max(worst_stair, err);
            failures += err > 1e-10 ? 1 : 0;
        }
    }
    const double secs = seconds_since(t0);
    return {failures == 0 && secs < 120.0,
            format("max MC rel err %.2e, max staircase err %.1e, %.0f s", worst_mc, worst_stair, secs)};
}

// 2. Fast non-dominated sort against brute-force peeling.
Outcome dominance_sort_oracle()
{
    const auto t0 = Clock::now();
    std::mt19937_64 rng(202);
    std::uniform_int_distribution<int> size(1, 100), dims(2, 5), grid(0, 5);
    int mismatches = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = size(rng), k = dims(rng);
        auto pts = random_points(rng, n, k);
        if (trial % 2 == 0) // coarse grid on half the instances to force ties
            for (auto& p : pts)
                for (int j = 0; j < k; ++j)
                    p[j] = grid(rng);
        mismatches += nsga2::fast_nondominated_sort(pts) == oracle::brute_force_fronts(pts) ? 0 : 1;
    }
    const double secs = seconds_since(t0);
    return {mismatches == 0 && secs < 60.0, format("%d mismatches in 1000 instances, %.1f s", mismatches, secs)};
}

// 3. Greedy DPP selection against exhaustive enumeration.
Outcome dpp_greedy_quality()
{
    const auto t0 = Clock::now();
    std::mt19937_64 rng(303);
    std::normal_distribution<double> n01;
    int good = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        Eigen::MatrixXd a(8, 8);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j)
                a(i, j) = n01(rng);
        const Eigen::MatrixXd l = a * a.transpose();
        auto pick = dpp::dpp_select(l, 3);
        std::sort(pick.begin(), pick.end());
        std::vector<std::vector<std::size_t>> subsets;
        const auto all = oracle::all_subset_logdets(l, 3, &subsets);
        const auto mine = all[static_cast<std::size_t>(std::find(subsets.begin(), subsets.end(), pick) - subsets.begin())];
        // Top 10% of 56 subsets: at most 5 subsets strictly better.
        const auto better = std::count_if(all.begin(), all.end(), [&](double v) { return v > mine + 1e-12; });
        good += better <= 5 ? 1 : 0;
    }
    const double secs = seconds_since(t0);
    return {good >= 950 && secs < 60.0, format("%d/1000 trials in the top 10%%, %.1f s", good, secs)};
}

// 4. GP marginal-likelihood gradient and posterior against dense references.
Outcome gp_correctness()
{
    const auto t0 = Clock::now();
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> u(0.0, 1.0), logscale(std::log(0.1), std::log(3.0));
    std::normal_distribution<double> n01;
    double worst_grad = 0.0, worst_pred = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 1 + trial % 4;
        const auto xs = random_points(rng, 5, d);
        Eigen::VectorXd y(5);
        for (int i = 0; i < 5; ++i)
            y[i] = 3.0 * n01(rng) + 1.0;
        gp::KernelHyperparams h = gp::KernelHyperparams::initial(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j)
            h.lengthscales[j] = std::exp(logscale(rng));
        h.signal_std = std::exp(logscale(rng));

        const Eigen::MatrixXd x = gp::stack_rows(xs);
        const Eigen::VectorXd z = (y.array() - y.mean()) / std::sqrt((y.array() - y.mean()).square().mean());
        const auto g = gp::log_marginal_likelihood(x, z, h).grad;
        for (int p = 0; p <= d; ++p) {
            auto at = [&](double delta) {
                gp::KernelHyperparams q = h;
                if (p < d)
                    q.lengthscales[p] *= std::exp(delta);
                else
                    q.signal_std *= std::exp(delta);
                return gp::log_marginal_likelihood(x, z, q, 0.0, false).value;
            };
            // Fourth-order central difference.
            const double s = 1e-3;
            const double fd = (-at(2 * s) + 8 * at(s) - 8 * at(-s) + at(-2 * s)) / (12 * s);
            worst_grad = std::max(worst_grad, std::abs(g[p] - fd) / std::max(std::abs(fd), 1e-3));
        }

        const auto model = gp::GaussianSurrogate::condition(xs, y, h);
        const double diag = h.noise_std * h.noise_std + model.jitter();
        for (const auto& q : random_points(rng, 4, d)) {
            const auto got = model.predict(q);
            const auto want = oracle::dense_gp_predict(xs, y, h.lengthscales, h.signal_std, diag, q);
            worst_pred = std::max({worst_pred, std::abs(got.mean - want.mean), std::abs(got.std - want.std)});
        }
    }
    const double secs = seconds_since(t0);
    return {worst_grad <= 1e-4 && worst_pred <= 1e-8 && secs < 120.0,
            format("max gradient rel err %.2e, max prediction err %.2e, %.1f s", worst_grad, worst_pred, secs)};
}

// 5. Bandit algebra.
Outcome bandit_algebra()
{
    std::vector<std::string> notes;
    bool ok = true;

    bandit::BanditState two(2, {0.7, 4.0, true});
    two.update({1.0, 1.0});
    two.update({1.0, 1.0});
    const bool g_ok = std::abs(two.cumulative()[0] - 1.7) < 1e-12;
    ok = ok && g_ok;
    notes.push_back(format("g=%.12g", two.cumulative()[0]));

    const double p1 = bandit::softmax({0.0, -1.0}, 4.0)[0];
    const bool p_ok = std::abs(p1 - 1.0 / (1.0 + std::exp(-4.0))) < 1e-12 && std::abs(p1 - 0.98201) < 5e-6;
    ok = ok && p_ok;
    notes.push_back(format("p1=%.6f", p1));

    std::mt19937_64 rng(505);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::uniform_int_distribution<int> arms(1, 6), len(1, 20);
    double worst_sum = 0.0;
    for (int s = 0; s < 10000; ++s) {
        const auto m = static_cast<std::size_t>(arms(rng));
        bandit::BanditState st(m, {0.7, 4.0, true});
        const int rounds = len(rng);
        for (int t = 0; t < rounds; ++t) {
            std::vector<double> ir(m);
            for (auto& v : ir)
                v = u(rng);
            st.update(ir);
        }
        double sum = 0.0;
        for (double p : st.probabilities())
            sum += p;
        worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    }
    ok = ok && worst_sum <= 1e-12;
    notes.push_back(format("max |sum p - 1|=%.1e", worst_sum));

    bandit::BanditState cold(4);
    cold.update({0.0, 0.0, 0.0, 0.0});
    bool uniform = true;
    for (double p : cold.probabilities())
        uniform = uniform && std::abs(p - 0.25) < 1e-15;
    ok = ok && uniform;
    notes.push_back(uniform ? "cold start uniform" : "cold start NOT uniform");

    bandit::BanditState rig(4);
    int reached = -1;
    for (int t = 1; t <= 30 && reached < 0; ++t) {
        const double weak = 0.5 * std::pow(0.9, t);
        rig.update({1.0, weak, weak, weak});
        if (rig.probabilities()[0] > 0.8)
            reached = t;
    }
    ok = ok && reached > 0;
    notes.push_back(reached > 0 ? format("rigged arm p>0.8 after %d updates", reached) : "rigged arm never reached 0.8");

    std::string detail;
    for (const auto& n : notes)
        detail += (detail.empty() ? "" : ", ") + n;
    return {ok, detail};
}

// 6. Mixing weights beat both simplex vertices.
Outcome lambda_fitting()
{
    const auto t0 = Clock::now();
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> size(6, 20), dims(1, 4);
    double worst_gap = INFINITY, worst_simplex = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = size(rng), d = dims(rng);
        const auto xs = random_points(rng, n, d);
        Eigen::VectorXd y1(n), y2(n);
        std::vector<ObjectiveVector> outs;
        const double a = 1.0 + 3.0 * u(rng), b = 0.2 + u(rng);
        for (int i = 0; i < n; ++i) {
            const auto& x = xs[static_cast<std::size_t>(i)];
            y1[i] = std::sin(a * x.sum()) + 0.05 * u(rng);
            y2[i] = b * (x.array() - 0.6).square().sum() - 0.5 * y1[i];
            outs.push_back(Eigen::Vector2d(y1[i], y2[i]));
        }
        gp::FitOptions fo;
        fo.seed = static_cast<std::uint64_t>(trial);
        const std::vector<gp::GaussianSurrogate> gps{gp::GaussianSurrogate::fit(xs, y1, fo),
                                                     gp::GaussianSurrogate::fit(xs, y2, fo)};
        const ReferencePoint r{Eigen::Vector2d(3, 3)};
        dpp::LambdaFitOptions lo;
        lo.seed = static_cast<std::uint64_t>(trial);
        const auto w = dpp::fit_lambda(xs, outs, gps, r, lo);

        const auto grams = dpp::surrogate_grams(xs, gps);
        const Eigen::VectorXd targets = dpp::hvc_targets(outs, r);
        auto lml = [&](const Eigen::VectorXd& lam) {
            Eigen::MatrixXd k = lam[0] * grams[0] + lam[1] * grams[1];
            k.diagonal().array() += lo.noise;
            return oracle::gaussian_log_likelihood(k, targets);
        };
        const double best_vertex = std::max(lml(Eigen::Vector2d(1, 0)), lml(Eigen::Vector2d(0, 1)));
        worst_gap = std::min(worst_gap, lml(w.lambda) - best_vertex);
        double off = std::abs(w.lambda.sum() - 1.0);
        for (Eigen::Index i = 0; i < w.lambda.size(); ++i)
            off = std::max({off, -w.lambda[i], w.lambda[i] - 1.0});
        worst_simplex = std::max(worst_simplex, off);
    }
    const double secs = seconds_since(t0);
    return {worst_gap >= -1e-6 && worst_simplex <= 1e-8 && secs < 180.0,
            format("min LML(fit) - max vertex LML = %.3e, max simplex violation %.1e, %.1f s", worst_gap,
                   worst_simplex, secs)};
}

driver::RunConfig desk_config(std::uint64_t seed)
{
    driver::RunConfig c;
    c.problem = "zdt1";
    c.dim = 4;
    c.batch_size = 4;
    c.budget = 65;
    c.initial_points = 5;
    c.seed = seed;
    return c;
}

struct DeskResult {
    double hv = 0.0;
    double dpf = 0.0;
};

// HV and all-evaluated DPF recomputed from the raw outputs with the oracles.
DeskResult score(const driver::ExperimentTrace& t)
{
    const auto outs = t.all_outputs();
    return {oracle::staircase_hv(outs, Eigen::Vector2d(11, 11)), oracle::mean_pairwise_distance(outs)};
}

struct DeskRuns {
    std::vector<DeskResult> pdbo, random, spm;
    double pdbo_secs = 0.0, random_secs = 0.0, spm_secs = 0.0;
};

DeskRuns& desk_runs()
{
    static DeskRuns runs;
    return runs;
}

void ensure_pdbo_and_random()
{
    auto& d = desk_runs();
    if (!d.pdbo.empty())
        return;
    auto t0 = Clock::now();
    for (std::uint64_t s = 0; s < 10; ++s)
        d.pdbo.push_back(score(driver::run_pdbo(desk_config(s))));
    d.pdbo_secs = seconds_since(t0);
    t0 = Clock::now();
    for (std::uint64_t s = 0; s < 10; ++s)
        d.random.push_back(score(driver::run_random_baseline(desk_config(s))));
    d.random_secs = seconds_since(t0);
}

double mean_hv(const std::vector<DeskResult>& v)
{
    double s = 0.0;
    for (const auto& r : v)
        s += r.hv;
    return s / static_cast<double>(v.size());
}

// 7. Desk-scale comparison against random search.
Outcome beats_random()
{
    ensure_pdbo_and_random();
    const auto& d = desk_runs();
    int dpf_wins = 0;
    for (std::size_t i = 0; i < d.pdbo.size(); ++i)
        dpf_wins += d.pdbo[i].dpf > d.random[i].dpf ? 1 : 0;
    const double a = mean_hv(d.pdbo), b = mean_hv(d.random);
    const double secs = d.pdbo_secs + d.random_secs;
    return {a > b && dpf_wins >= 7 && secs < 900.0,
            format("mean HV %.4f vs random %.4f, DPF wins %d/10, %.0f s", a, b, dpf_wins, secs)};
}

// 8. Relative-HV reward versus summed posterior mean reward.
Outcome reward_ablation()
{
    ensure_pdbo_and_random();
    auto& d = desk_runs();
    const auto t0 = Clock::now();
    d.spm.clear();
    for (std::uint64_t s = 0; s < 10; ++s) {
        auto c = desk_config(s);
        c.reward_mode = bandit::RewardMode::SumPosteriorMean;
        d.spm.push_back(score(driver::run_pdbo(c)));
    }
    d.spm_secs = seconds_since(t0);
    const double a = mean_hv(d.pdbo), b = mean_hv(d.spm);
    return {a >= b * (1.0 - 0.005) && d.spm_secs < 900.0,
            format("mean HV relative-hv %.4f vs spm %.4f (%+.3f%%), %.0f s", a, b, 100.0 * (a - b) / b, d.spm_secs)};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 9. Same seed, same CSV bytes, for every loop.
Outcome determinism()
{
    const auto dir = fs::temp_directory_path() / "pdbo_acceptance";
    fs::create_directories(dir);
    int identical = 0, total = 0;
    auto check = [&](const driver::RunConfig& c, const std::string& tag) {
        const auto a = dir / (tag + "_a.csv"), b = dir / (tag + "_b.csv");
        driver::write_trace(driver::run(c), a);
        driver::write_trace(driver::run(c), b);
        const auto x = slurp(a);
        identical += (!x.empty() && x == slurp(b)) ? 1 : 0;
        ++total;
    };
    auto c = desk_config(3);
    check(c, "pdbo");
    c.baseline = driver::Baseline::Random;
    check(c, "random");
    c.baseline = driver::Baseline::Static;
    c.static_af = AcquisitionKind::TS;
    c.budget = 25;
    check(c, "static_ts");
    c = desk_config(4);
    c.problem = "dtlz1";
    c.dim.reset();
    c.budget = 25;
    check(c, "dtlz1");
    return {identical == total, format("%d/%d repeated runs byte-identical", identical, total)};
}

// 10. Benchmark values and the problem table.
Outcome benchmark_values()
{
    bool ok = true;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(25);
    ok = ok && benchmarks::zdt1(x) == Eigen::Vector2d(0, 1);
    ok = ok && benchmarks::zdt2(x) == Eigen::Vector2d(0, 1);
    x[0] = 1.0;
    ok = ok && (benchmarks::zdt1(x) - Eigen::Vector2d(1, 0)).cwiseAbs().maxCoeff() < 1e-15;
    const bool values_ok = ok;

    struct Row {
        const char* name;
        std::size_t d, k;
        std::vector<double> r;
    };
    const std::vector<Row> table{
        {"zdt1", 25, 2, {11, 11}},
        {"zdt2", 4, 2, {11, 11}},
        {"zdt3", 12, 2, {11, 11}},
        {"dtlz1", 10, 4, {400, 400, 400, 400}},
        {"dtlz3", 9, 4, {1e4, 1e4, 1e4, 1e4}},
        {"dtlz5", 12, 6, {10, 10, 10, 10, 10, 10}},
        {"gear-train", 4, 3, {6.6764, 59.0, 0.4633}},
    };
    int matched = 0;
    for (const auto& row : table) {
        const auto p = benchmarks::make_problem(row.name);
        bool same = p.d == row.d && p.k == row.k && p.reference_point.size() == row.r.size();
        for (std::size_t j = 0; same && j < row.r.size(); ++j)
            same = p.reference_point.values[static_cast<Eigen::Index>(j)] == row.r[j];
        matched += same ? 1 : 0;
    }
    return {values_ok && matched == 7,
            format("hand values %s, registry %d/7 rows match", values_ok ? "ok" : "WRONG", matched)};
}

struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> all{
        {1, "hypervolume oracle", hypervolume_oracle},
        {2, "dominance sort oracle", dominance_sort_oracle},
        {3, "DPP greedy quality", dpp_greedy_quality},
        {4, "GP correctness", gp_correctness},
        {5, "bandit algebra", bandit_algebra},
        {6, "mixing weight fit", lambda_fitting},
        {7, "desk-scale dominance over random", beats_random},
        {8, "reward ablation direction", reward_ablation},
        {9, "determinism", determinism},
        {10, "benchmark values", benchmark_values},
    };
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i)
        wanted.insert(std::atoi(argv[i]));

    int failed = 0;
    for (const auto& c : all) {
        if (!wanted.empty() && !wanted.count(c.id))
            continue;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] criterion %2d: %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}

#include "pdbo/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "pdbo/benchmarks.hpp"
#include "pdbo/dpp.hpp"

namespace pdbo::driver {

namespace {

// Random stream identifiers for derive_seed.
enum Stream : std::uint64_t {
    kInitStream = 1,
    kGpStream = 2,
    kThompsonStream = 3,
    kNsgaStream = 4,
    kPadStream = 5,
    kSelectStream = 6,
    kDuplicateStream = 7,
    kLambdaStream = 8,
    kRandomBatchStream = 9,
};

constexpr double kDuplicateRadius = 1e-9;

std::vector<double> to_std(const Eigen::VectorXd& v)
{
    return {v.data(), v.data() + v.size()};
}

InputVector random_unit(std::size_t d, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    InputVector x(static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < x.size(); ++i)
        x[i] = u(rng);
    return x;
}

// Evaluation state shared by every loop. Inputs are stored in unit-cube
// coordinates; outputs are raw problem values.
class Session {
public:
    explicit Session(const RunConfig& cfg)
        : cfg_(cfg), problem_(benchmarks::make_problem(cfg.problem, cfg.dim)),
          budget_(cfg.resolved_budget()), iterations_(cfg.resolved_iterations())
    {
        cfg.validate();
        trace_.config = cfg;
        trace_.reference_point = to_std(problem_.reference_point.values);

        std::mt19937_64 rng(derive_seed(cfg.seed, kInitStream, 0, 0));
        std::vector<std::size_t> fresh;
        for (std::size_t i = 0; i < cfg.initial_points; ++i) {
            const InputVector u = random_unit(problem_.d, rng);
            const ObjectiveVector y = evaluate(u);
            trace_.initial_inputs.push_back(to_std(raw(u)));
            trace_.initial_outputs.push_back(to_std(y));
            data_.add(u, y, 0);
            fresh.push_back(data_.size() - 1);
        }
        archive_ = update_archive(archive_, data_, fresh);
    }

    const RunConfig& cfg() const { return cfg_; }
    const benchmarks::ProblemSpec& problem() const { return problem_; }
    const EvaluatedDataset& data() const { return data_; }
    const ParetoArchive& archive() const { return archive_; }
    int iterations() const { return iterations_; }
    std::size_t remaining() const { return budget_ - data_.size(); }
    ExperimentTrace& trace() { return trace_; }

    InputVector raw(const InputVector& u) const
    {
        return problem_.bounds.from_unit(u).cwiseMax(problem_.bounds.lower).cwiseMin(problem_.bounds.upper);
    }

    ObjectiveVector evaluate(const InputVector& u) const { return problem_.evaluate(raw(u)); }

    std::vector<gp::GaussianSurrogate> fit_surrogates(int t) const
    {
        std::vector<gp::GaussianSurrogate> gps;
        gps.reserve(problem_.k);
        for (std::size_t k = 0; k < problem_.k; ++k) {
            gp::FitOptions opts;
            opts.starts = cfg_.gp_starts;
            opts.seed = derive_seed(cfg_.seed, kGpStream, static_cast<std::uint64_t>(t), k);
            gps.push_back(gp::GaussianSurrogate::fit(data_.inputs(), data_.objective_column(k), opts));
        }
        return gps;
    }

    /// Replace batch points that repeat an evaluated input (or an earlier
    /// point of the same batch) by uniform random points.
    std::vector<InputVector> guard_duplicates(std::vector<InputVector> batch, int t) const
    {
        std::mt19937_64 rng(derive_seed(cfg_.seed, kDuplicateStream, static_cast<std::uint64_t>(t), 0));
        for (std::size_t i = 0; i < batch.size(); ++i) {
            auto clashes = [&](const InputVector& x) {
                for (const auto& e : data_.inputs())
                    if ((e - x).norm() <= kDuplicateRadius)
                        return true;
                for (std::size_t j = 0; j < i; ++j)
                    if ((batch[j] - x).norm() <= kDuplicateRadius)
                        return true;
                return false;
            };
            while (clashes(batch[i]))
                batch[i] = random_unit(problem_.d, rng);
        }
        return batch;
    }

    /// Evaluate and append a batch, then log the iteration record.
    void commit(IterationRecord rec, const std::vector<InputVector>& batch,
                std::chrono::steady_clock::time_point started)
    {
        std::vector<std::size_t> fresh;
        for (const auto& u : batch) {
            const ObjectiveVector y = evaluate(u);
            rec.batch_inputs.push_back(to_std(raw(u)));
            rec.batch_outputs.push_back(to_std(y));
            data_.add(u, y, rec.iteration);
            fresh.push_back(data_.size() - 1);
        }
        archive_ = update_archive(archive_, data_, fresh);
        const auto front = archive_.front(data_);
        rec.evaluations = data_.size();
        rec.hypervolume = metrics::hypervolume(front, problem_.reference_point);
        rec.dpf_all = metrics::dpf(data_.outputs(), metrics::DpfMode::AllEvaluated);
        rec.dpf_front = metrics::dpf(front, metrics::DpfMode::AllEvaluated);
        rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        trace_.records.push_back(std::move(rec));
    }

    ExperimentTrace finish()
    {
        for (std::size_t i : archive_.indices) {
            trace_.pareto_set.push_back(to_std(raw(data_.inputs()[i])));
            trace_.pareto_front.push_back(to_std(data_.outputs()[i]));
        }
        return std::move(trace_);
    }

private:
    RunConfig cfg_;
    benchmarks::ProblemSpec problem_;
    std::size_t budget_;
    int iterations_;
    EvaluatedDataset data_;
    ParetoArchive archive_;
    ExperimentTrace trace_;
};

Eigen::VectorXd incumbents(const EvaluatedDataset& data, std::size_t k)
{
    Eigen::VectorXd tau(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i)
        tau[static_cast<Eigen::Index>(i)] = data.objective_column(i).minCoeff();
    return tau;
}

std::vector<std::size_t> uncertainty_select(const nsga2::CheapParetoSet& cheap,
                                            const std::vector<gp::GaussianSurrogate>& gps,
                                            std::size_t batch_size)
{
    std::vector<double> score(cheap.size(), 0.0);
    for (std::size_t c = 0; c < cheap.size(); ++c)
        for (const auto& g : gps)
            score[c] += std::log(std::max(g.predict(cheap.inputs[c]).std, 1e-300));
    std::vector<std::size_t> order(cheap.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
    order.resize(std::min(batch_size, order.size()));
    return order;
}

struct ArmNomination {
    std::vector<InputVector> batch;
};

// Cheap MOO for one acquisition plus batch selection; pads a short candidate
// set with uniform random points.
ArmNomination nominate(const Session& s, AcquisitionKind kind, std::size_t arm, int t,
                       const std::vector<gp::GaussianSurrogate>& gps, const Eigen::VectorXd& lambda,
                       std::size_t batch_size)
{
    const auto& cfg = s.cfg();
    const std::size_t d = s.problem().d;
    const auto ti = static_cast<std::uint64_t>(t);

    AcquisitionParams ap;
    ap.iteration = t;
    ap.incumbents = incumbents(s.data(), s.problem().k);
    ap.ts_features = cfg.ts_features;
    ap.ts_seed = derive_seed(cfg.seed, kThompsonStream, ti, arm);
    const Acquisition af(kind, gps, ap);

    nsga2::Config nc;
    nc.population_size = cfg.population_size;
    nc.generations = cfg.generations;
    nc.seed = derive_seed(cfg.seed, kNsgaStream, ti, arm);
    const auto cheap = nsga2::solve_cheap_moo(af, Bounds::unit(d), nc, s.archive().pareto_set(s.data()));

    std::vector<std::size_t> picks;
    switch (cfg.selection) {
    case Selection::Dpp:
        picks = dpp::dpp_select(dpp::build_dpp_kernel(cheap.inputs, gps, lambda), batch_size);
        break;
    case Selection::GreedyHvc: {
        std::vector<ObjectiveVector> predicted;
        for (const auto& x : cheap.inputs) {
            ObjectiveVector y(static_cast<Eigen::Index>(gps.size()));
            for (std::size_t i = 0; i < gps.size(); ++i)
                y[static_cast<Eigen::Index>(i)] = gps[i].predict_mean(x);
            predicted.push_back(std::move(y));
        }
        picks = greedy_hvc_select(predicted, s.archive().front(s.data()), s.problem().reference_point,
                                  batch_size);
        break;
    }
    case Selection::Uncertainty:
        picks = uncertainty_select(cheap, gps, batch_size);
        break;
    }

    ArmNomination out;
    for (std::size_t i : picks)
        out.batch.push_back(cheap.inputs[i]);
    std::mt19937_64 rng(derive_seed(cfg.seed, kPadStream, ti, arm));
    while (out.batch.size() < batch_size)
        out.batch.push_back(random_unit(d, rng));
    return out;
}

ExperimentTrace run_model_based(const RunConfig& cfg, const std::vector<AcquisitionKind>& arms,
                                bool adaptive)
{
    Session s(cfg);
    for (auto k : arms)
        s.trace().arm_names.push_back(to_string(k));

    bandit::BanditConfig bc;
    bc.gamma = cfg.gamma;
    bc.eta = cfg.eta;
    if (cfg.reward_mode == bandit::RewardMode::SumPosteriorMean) {
        // The posterior-mean reward is used as a plain cumulative sum.
        bc.gamma = 1.0;
        bc.normalize = false;
    }
    bandit::BanditState state(arms.size(), bc);
    bandit::PreviousNomination previous;

    for (int t = 1; t <= s.iterations(); ++t) {
        const auto started = std::chrono::steady_clock::now();
        const std::size_t bt = std::min(cfg.batch_size, s.remaining());
        if (bt == 0)
            break;
        const auto ti = static_cast<std::uint64_t>(t);

        const auto gps = s.fit_surrogates(t);

        Eigen::VectorXd lambda;
        if (cfg.selection == Selection::Dpp) {
            dpp::LambdaFitOptions lo;
            lo.seed = derive_seed(cfg.seed, kLambdaStream, ti, 0);
            lambda = dpp::fit_lambda(s.data().inputs(), s.data().outputs(), gps,
                                     s.problem().reference_point, lo)
                         .lambda;
        }

        std::vector<std::vector<InputVector>> batches;
        for (std::size_t j = 0; j < arms.size(); ++j)
            batches.push_back(nominate(s, arms[j], j, t, gps, lambda, bt).batch);

        IterationRecord rec;
        rec.iteration = t;
        std::size_t chosen = 0;
        if (adaptive) {
            rec.immediate_rewards = bandit::compute_immediate_rewards(
                gps, previous, arms.size(), s.problem().reference_point, cfg.reward_mode);
            state.update(rec.immediate_rewards);
            std::mt19937_64 rng(derive_seed(cfg.seed, kSelectStream, ti, 0));
            chosen = state.select_arm(rng);
            rec.cumulative_rewards = state.cumulative();
            rec.normalized_rewards = state.normalized();
            rec.probabilities = state.probabilities();
        } else {
            rec.immediate_rewards.assign(arms.size(), 0.0);
            rec.cumulative_rewards.assign(arms.size(), 0.0);
            rec.normalized_rewards.assign(arms.size(), 0.0);
            rec.probabilities.assign(arms.size(), 1.0 / static_cast<double>(arms.size()));
        }
        rec.selected_af = to_string(arms[chosen]);
        rec.lambda = to_std(lambda);

        // Rewards at t+1 score these nominations against the front they saw.
        previous.front = s.archive().front(s.data());
        previous.front_hv = metrics::hypervolume(previous.front, s.problem().reference_point);
        previous.batches = batches;

        const auto batch = s.guard_duplicates(batches[chosen], t);
        s.commit(std::move(rec), batch, started);
    }
    return s.finish();
}

} // namespace

std::string to_string(Baseline b)
{
    switch (b) {
    case Baseline::None: return "none";
    case Baseline::Random: return "random";
    case Baseline::Static: return "static";
    }
    return "?";
}

std::string to_string(Selection s)
{
    switch (s) {
    case Selection::Dpp: return "dpp";
    case Selection::GreedyHvc: return "greedy-hvc";
    case Selection::Uncertainty: return "uncertainty";
    }
    return "?";
}

Selection parse_selection(std::string_view name)
{
    if (name == "dpp")
        return Selection::Dpp;
    if (name == "greedy-hvc" || name == "greedy_hvc")
        return Selection::GreedyHvc;
    if (name == "uncertainty")
        return Selection::Uncertainty;
    throw LookupError("unknown selection '" + std::string(name) + "'");
}

std::size_t RunConfig::resolved_budget() const
{
    if (budget)
        return *budget;
    return initial_points + static_cast<std::size_t>(iterations.value_or(0)) * batch_size;
}

int RunConfig::resolved_iterations() const
{
    if (iterations)
        return *iterations;
    if (!budget || batch_size == 0 || *budget < initial_points)
        return 0;
    return static_cast<int>((*budget - initial_points + batch_size - 1) / batch_size);
}

void RunConfig::validate() const
{
    if (initial_points < 2)
        throw ParameterError("initial_points must be >= 2");
    if (batch_size < 1)
        throw ParameterError("batch_size must be >= 1");
    if (!iterations && !budget)
        throw ParameterError("either iterations or budget must be set");
    if (iterations && *iterations < 1)
        throw ParameterError("iterations must be >= 1");
    if (resolved_budget() < initial_points + batch_size)
        throw ParameterError("budget must be at least initial_points + batch_size");
    if (portfolio.empty())
        throw ParameterError("portfolio must not be empty");
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw ParameterError("gamma must lie in (0, 1]");
    if (!(eta > 0.0))
        throw ParameterError("eta must be positive");
    if (population_size < 2 || static_cast<std::size_t>(population_size) < 2 * batch_size)
        throw ParameterError("population_size must be >= 2 * batch_size");
    if (generations < 1)
        throw ParameterError("generations must be >= 1");
    if (ts_features < 1)
        throw ParameterError("ts_features must be >= 1");
}

std::vector<ObjectiveVector> ExperimentTrace::all_outputs() const
{
    std::vector<ObjectiveVector> out;
    auto push = [&](const std::vector<double>& y) {
        out.push_back(Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size())));
    };
    for (const auto& y : initial_outputs)
        push(y);
    for (const auto& r : records)
        for (const auto& y : r.batch_outputs)
            push(y);
    return out;
}

std::size_t ExperimentTrace::total_evaluations() const
{
    std::size_t n = initial_outputs.size();
    for (const auto& r : records)
        n += r.batch_outputs.size();
    return n;
}

std::vector<std::size_t> greedy_hvc_select(const std::vector<ObjectiveVector>& predicted,
                                           const std::vector<ObjectiveVector>& front,
                                           const ReferencePoint& r, std::size_t batch_size)
{
    std::vector<std::size_t> picks;
    std::vector<bool> taken(predicted.size(), false);
    std::vector<ObjectiveVector> current = front;
    double current_hv = metrics::hypervolume(current, r);
    while (picks.size() < std::min(batch_size, predicted.size())) {
        std::size_t best = predicted.size();
        double best_gain = -1.0;
        for (std::size_t i = 0; i < predicted.size(); ++i) {
            if (taken[i])
                continue;
            current.push_back(predicted[i]);
            const double gain = metrics::hypervolume(current, r) - current_hv;
            current.pop_back();
            if (gain > best_gain) {
                best_gain = gain;
                best = i;
            }
        }
        taken[best] = true;
        picks.push_back(best);
        current.push_back(predicted[best]);
        current_hv = metrics::hypervolume(current, r);
    }
    return picks;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t iteration,
                          std::uint64_t index)
{
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(mix(master) ^ stream) ^ iteration) ^ index);
}

ExperimentTrace run_pdbo(const RunConfig& cfg)
{
    return run_model_based(cfg, cfg.portfolio, true);
}

ExperimentTrace run_static_af(const RunConfig& cfg, AcquisitionKind kind)
{
    return run_model_based(cfg, {kind}, false);
}

ExperimentTrace run_random_baseline(const RunConfig& cfg)
{
    Session s(cfg);
    for (int t = 1; t <= s.iterations(); ++t) {
        const auto started = std::chrono::steady_clock::now();
        const std::size_t bt = std::min(cfg.batch_size, s.remaining());
        if (bt == 0)
            break;
        std::mt19937_64 rng(derive_seed(cfg.seed, kRandomBatchStream, static_cast<std::uint64_t>(t), 0));
        std::vector<InputVector> batch;
        for (std::size_t i = 0; i < bt; ++i)
            batch.push_back(random_unit(s.problem().d, rng));
        IterationRecord rec;
        rec.iteration = t;
        rec.selected_af = "random";
        s.commit(std::move(rec), s.guard_duplicates(std::move(batch), t), started);
    }
    return s.finish();
}

ExperimentTrace run(const RunConfig& cfg)
{
    switch (cfg.baseline) {
    case Baseline::None: return run_pdbo(cfg);
    case Baseline::Random: return run_random_baseline(cfg);
    case Baseline::Static: return run_static_af(cfg, cfg.static_af);
    }
    return run_pdbo(cfg);
}

} // namespace pdbo::driver

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pdbo/acquisition.hpp"
#include "pdbo/bandit.hpp"
#include "pdbo/core.hpp"
#include "pdbo/gp.hpp"
#include "pdbo/metrics.hpp"
#include "pdbo/nsga2.hpp"

namespace pdbo::driver {

/// Which loop produced a trace.
enum class Baseline { None, Random, Static };
/// How a batch is picked from a cheap Pareto set.
enum class Selection { Dpp, GreedyHvc, Uncertainty };

std::string to_string(Baseline b);
std::string to_string(Selection s);
Selection parse_selection(std::string_view name);

struct RunConfig {
    std::string problem = "zdt1";
    /// Overrides the problem's default input dimension.
    std::optional<std::size_t> dim;
    std::size_t batch_size = 4;
    /// Number of BO iterations (T_max).
    std::optional<int> iterations;
    /// Total evaluation budget including the initial design.
    std::optional<std::size_t> budget;
    std::size_t initial_points = 5;
    std::uint64_t seed = 0;
    std::vector<AcquisitionKind> portfolio = default_portfolio();
    double gamma = 0.7;
    double eta = 4.0;
    bandit::RewardMode reward_mode = bandit::RewardMode::RelativeHv;
    /// DPF variant reported in summaries; both variants are always traced.
    metrics::DpfMode dpf_mode = metrics::DpfMode::AllEvaluated;
    Baseline baseline = Baseline::None;
    /// Pinned acquisition for Baseline::Static.
    AcquisitionKind static_af = AcquisitionKind::EI;
    Selection selection = Selection::Dpp;
    int population_size = 100;
    int generations = 200;
    int ts_features = 500;
    int gp_starts = 5;
    std::string output_path;

    /// Total evaluations allowed. Defaults to initial_points + T_max * batch_size.
    std::size_t resolved_budget() const;
    /// T_max. Derived from the budget when only the budget is given.
    int resolved_iterations() const;
    /// Throws ParameterError on inconsistent settings.
    void validate() const;

    bool operator==(const RunConfig&) const = default;
};

struct IterationRecord {
    int iteration = 0;
    std::string selected_af;
    /// Evaluations spent so far, initial design included.
    std::size_t evaluations = 0;
    double hypervolume = 0.0;
    double dpf_all = 0.0;
    double dpf_front = 0.0;
    /// Per arm, in portfolio order.
    std::vector<double> immediate_rewards;
    std::vector<double> cumulative_rewards;
    std::vector<double> normalized_rewards;
    std::vector<double> probabilities;
    std::vector<double> lambda;
    /// Raw (problem-unit) inputs and outputs of the evaluated batch.
    std::vector<std::vector<double>> batch_inputs;
    std::vector<std::vector<double>> batch_outputs;
    /// Not written to the CSV (which must be reproducible byte for byte).
    double wall_time = 0.0;

    bool operator==(const IterationRecord&) const = default;
};

struct ExperimentTrace {
    RunConfig config;
    std::vector<std::string> arm_names;
    std::vector<double> reference_point;
    std::vector<std::vector<double>> initial_inputs;
    std::vector<std::vector<double>> initial_outputs;
    std::vector<IterationRecord> records;
    std::vector<std::vector<double>> pareto_set;
    std::vector<std::vector<double>> pareto_front;

    /// Every evaluated output in order (initial design, then batches).
    std::vector<ObjectiveVector> all_outputs() const;
    std::size_t total_evaluations() const;

    bool operator==(const ExperimentTrace&) const = default;
};

/// Adaptive acquisition selection with DPP batch selection.
ExperimentTrace run_pdbo(const RunConfig& cfg);
/// Uniform random batches.
ExperimentTrace run_random_baseline(const RunConfig& cfg);
/// Single pinned acquisition, bandit bypassed, batch chosen by cfg.selection.
ExperimentTrace run_static_af(const RunConfig& cfg, AcquisitionKind kind);
/// Dispatch on cfg.baseline.
ExperimentTrace run(const RunConfig& cfg);

/// Greedy pick of `batch_size` candidates by hypervolume gain of their
/// predicted means over `front` (and the picks so far). Lowest index wins ties.
std::vector<std::size_t> greedy_hvc_select(const std::vector<ObjectiveVector>& predicted,
                                           const std::vector<ObjectiveVector>& front,
                                           const ReferencePoint& r, std::size_t batch_size);

/// Seed of an independent random stream, derived from the master seed by
/// SplitMix64 mixing of (stream, iteration, index).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t iteration,
                          std::uint64_t index);

/// JSON sidecar path for a CSV trace path: "x.csv" -> "x.json".
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

/// CSV (one row per iteration) plus JSON sidecar holding the configuration,
/// initial design, wall times and final Pareto set/front.
void write_trace(const ExperimentTrace& trace, const std::filesystem::path& path);
ExperimentTrace read_trace(const std::filesystem::path& path);

/// Rows of objective values separated by whitespace or commas; "#" starts a comment.
std::vector<ObjectiveVector> read_front_file(const std::filesystem::path& path);

} // namespace pdbo::driver

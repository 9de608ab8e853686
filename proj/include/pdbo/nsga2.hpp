#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "pdbo/acquisition.hpp"
#include "pdbo/core.hpp"

namespace pdbo::nsga2 {

using Rng = std::mt19937_64;

struct Config {
    int population_size = 100;
    int generations = 200;
    double crossover_eta = 15.0;
    double mutation_eta = 20.0;
    double crossover_prob = 0.9;
    /// Per-variable mutation probability; defaults to 1/d.
    std::optional<double> mutation_prob;
    std::uint64_t seed = 0;
};

/// Rank-0 solutions of a cheap multi-objective problem.
struct CheapParetoSet {
    std::vector<InputVector> inputs;
    std::vector<Eigen::VectorXd> cheap_scores;

    std::size_t size() const { return inputs.size(); }
    bool empty() const { return inputs.empty(); }
};

/// Vector-valued objective to minimize.
using ScoreFn = std::function<Eigen::VectorXd(const InputVector&)>;
/// Called after every generation with the surviving population's scores.
using GenerationObserver = std::function<void(int generation, const std::vector<Eigen::VectorXd>&)>;

/// Deb's fast non-dominated sort. Front i holds the indices (ascending) that
/// are non-dominated once fronts 0..i-1 are removed.
std::vector<std::vector<std::size_t>> fast_nondominated_sort(const std::vector<Eigen::VectorXd>& scores);

/// Crowding distance of each member of a front. Boundary members of every
/// objective get +inf; objectives with zero range contribute nothing.
std::vector<double> crowding_distance(const std::vector<Eigen::VectorXd>& front_scores);

/// Simulated binary crossover with bounds. Children are clipped to the box.
std::pair<InputVector, InputVector> sbx_crossover(const InputVector& p1, const InputVector& p2,
                                                  const Bounds& bounds, double eta, double prob,
                                                  Rng& rng);

/// Bounded polynomial mutation; each variable mutates with probability `prob`.
InputVector polynomial_mutation(const InputVector& p, const Bounds& bounds, double eta, double prob,
                                Rng& rng);

/// Run NSGA-II on `score` over `bounds`. The initial population holds `seeds`
/// (capped at the population size) padded with uniform random points. Returns
/// the rank-0 front of the final population, duplicates removed.
CheapParetoSet solve(const ScoreFn& score, const Bounds& bounds, const Config& cfg,
                     const std::vector<InputVector>& seeds,
                     const GenerationObserver& observer = {});

/// The cheap MOO problem min_x (AF(GP_1, x), ..., AF(GP_K, x)).
CheapParetoSet solve_cheap_moo(const Acquisition& af, const Bounds& bounds, const Config& cfg,
                               const std::vector<InputVector>& seeds);

} // namespace pdbo::nsga2

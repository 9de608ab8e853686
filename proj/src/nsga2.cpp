#include "pdbo/nsga2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pdbo::nsga2 {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Individual {
    InputVector x;
    Eigen::VectorXd f;
    int rank = 0;
    double crowding = 0.0;
};

// True if a wins a binary tournament against b.
bool better(const Individual& a, const Individual& b)
{
    if (a.rank != b.rank)
        return a.rank < b.rank;
    return a.crowding > b.crowding;
}

double uniform01(Rng& rng)
{
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

} // namespace

std::vector<std::vector<std::size_t>> fast_nondominated_sort(const std::vector<Eigen::VectorXd>& scores)
{
    const std::size_t n = scores.size();
    std::vector<std::vector<std::size_t>> fronts;
    if (n == 0)
        return fronts;

    std::vector<std::vector<std::size_t>> dominated_by_me(n);
    std::vector<std::size_t> dom_count(n, 0);
    std::vector<std::size_t> current;
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            if (dominates(scores[p], scores[q])) {
                dominated_by_me[p].push_back(q);
                ++dom_count[q];
            } else if (dominates(scores[q], scores[p])) {
                dominated_by_me[q].push_back(p);
                ++dom_count[p];
            }
        }
    }
    for (std::size_t p = 0; p < n; ++p)
        if (dom_count[p] == 0)
            current.push_back(p);

    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t p : current)
            for (std::size_t q : dominated_by_me[p])
                if (--dom_count[q] == 0)
                    next.push_back(q);
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

std::vector<double> crowding_distance(const std::vector<Eigen::VectorXd>& front_scores)
{
    const std::size_t n = front_scores.size();
    std::vector<double> dist(n, 0.0);
    if (n <= 2) {
        std::fill(dist.begin(), dist.end(), kInf);
        return dist;
    }
    const Eigen::Index k = front_scores.front().size();
    std::vector<std::size_t> order(n);
    for (Eigen::Index m = 0; m < k; ++m) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return front_scores[a][m] < front_scores[b][m];
        });
        const double lo = front_scores[order.front()][m];
        const double hi = front_scores[order.back()][m];
        dist[order.front()] = kInf;
        dist[order.back()] = kInf;
        const double range = hi - lo;
        if (!(range > 0.0))
            continue;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (std::isinf(dist[order[i]]))
                continue;
            dist[order[i]] += (front_scores[order[i + 1]][m] - front_scores[order[i - 1]][m]) / range;
        }
    }
    return dist;
}

std::pair<InputVector, InputVector> sbx_crossover(const InputVector& p1, const InputVector& p2,
                                                  const Bounds& bounds, double eta, double prob,
                                                  Rng& rng)
{
    InputVector c1 = p1;
    InputVector c2 = p2;
    if (uniform01(rng) >= prob)
        return {c1, c2};

    const double exponent = 1.0 / (eta + 1.0);
    for (Eigen::Index i = 0; i < p1.size(); ++i) {
        if (uniform01(rng) > 0.5)
            continue;
        if (std::abs(p1[i] - p2[i]) <= 1e-14)
            continue;
        const double xl = bounds.lower[i];
        const double xu = bounds.upper[i];
        const double y1 = std::min(p1[i], p2[i]);
        const double y2 = std::max(p1[i], p2[i]);
        const double u = uniform01(rng);

        auto betaq_for = [&](double beta) {
            const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
            if (u <= 1.0 / alpha)
                return std::pow(u * alpha, exponent);
            return std::pow(1.0 / (2.0 - u * alpha), exponent);
        };

        const double bq1 = betaq_for(1.0 + 2.0 * (y1 - xl) / (y2 - y1));
        double v1 = 0.5 * ((y1 + y2) - bq1 * (y2 - y1));
        const double bq2 = betaq_for(1.0 + 2.0 * (xu - y2) / (y2 - y1));
        double v2 = 0.5 * ((y1 + y2) + bq2 * (y2 - y1));
        v1 = std::clamp(v1, xl, xu);
        v2 = std::clamp(v2, xl, xu);
        if (uniform01(rng) <= 0.5) {
            c1[i] = v2;
            c2[i] = v1;
        } else {
            c1[i] = v1;
            c2[i] = v2;
        }
    }
    return {c1, c2};
}

InputVector polynomial_mutation(const InputVector& p, const Bounds& bounds, double eta, double prob,
                                Rng& rng)
{
    InputVector y = p;
    const double exponent = 1.0 / (eta + 1.0);
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (uniform01(rng) >= prob)
            continue;
        const double yl = bounds.lower[i];
        const double yu = bounds.upper[i];
        const double span = yu - yl;
        if (!(span > 0.0))
            continue;
        const double d1 = (y[i] - yl) / span;
        const double d2 = (yu - y[i]) / span;
        const double r = uniform01(rng);
        double dq;
        if (r < 0.5) {
            const double val = 2.0 * r + (1.0 - 2.0 * r) * std::pow(1.0 - d1, eta + 1.0);
            dq = std::pow(val, exponent) - 1.0;
        } else {
            const double val = 2.0 * (1.0 - r) + 2.0 * (r - 0.5) * std::pow(1.0 - d2, eta + 1.0);
            dq = 1.0 - std::pow(val, exponent);
        }
        y[i] = std::clamp(y[i] + dq * span, yl, yu);
    }
    return y;
}

namespace {

// Assign rank and crowding to every member; returns the fronts.
std::vector<std::vector<std::size_t>> rank_population(std::vector<Individual>& pop)
{
    std::vector<Eigen::VectorXd> scores;
    scores.reserve(pop.size());
    for (const auto& ind : pop)
        scores.push_back(ind.f);
    auto fronts = fast_nondominated_sort(scores);
    for (std::size_t r = 0; r < fronts.size(); ++r) {
        std::vector<Eigen::VectorXd> fs;
        fs.reserve(fronts[r].size());
        for (std::size_t i : fronts[r])
            fs.push_back(pop[i].f);
        const auto cd = crowding_distance(fs);
        for (std::size_t j = 0; j < fronts[r].size(); ++j) {
            pop[fronts[r][j]].rank = static_cast<int>(r);
            pop[fronts[r][j]].crowding = cd[j];
        }
    }
    return fronts;
}

// Elitist (mu + lambda) survival: whole fronts first, the last partial front
// truncated by crowding distance. The member with the smallest objective sum
// of a truncated front is always kept.
std::vector<Individual> survive(std::vector<Individual> merged, std::size_t n)
{
    const auto fronts = rank_population(merged);
    std::vector<Individual> next;
    next.reserve(n);
    for (const auto& front : fronts) {
        if (next.size() + front.size() <= n) {
            for (std::size_t i : front)
                next.push_back(merged[i]);
            continue;
        }
        std::vector<std::size_t> order = front;
        auto best = order.begin();
        for (auto it = order.begin(); it != order.end(); ++it)
            if (merged[*it].f.sum() < merged[*best].f.sum())
                best = it;
        std::rotate(order.begin(), best, best + 1);
        std::stable_sort(order.begin() + 1, order.end(), [&](std::size_t a, std::size_t b) {
            return merged[a].crowding > merged[b].crowding;
        });
        for (std::size_t j = 0; next.size() < n; ++j)
            next.push_back(merged[order[j]]);
        break;
    }
    rank_population(next);
    return next;
}

std::size_t tournament(const std::vector<Individual>& pop, Rng& rng)
{
    std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
    const std::size_t a = pick(rng);
    const std::size_t b = pick(rng);
    if (better(pop[a], pop[b]))
        return a;
    if (better(pop[b], pop[a]))
        return b;
    return std::min(a, b);
}

} // namespace

CheapParetoSet solve(const ScoreFn& score, const Bounds& bounds, const Config& cfg,
                     const std::vector<InputVector>& seeds, const GenerationObserver& observer)
{
    if (cfg.population_size < 2)
        throw ParameterError("nsga2: population size must be >= 2");
    if (cfg.generations < 1)
        throw ParameterError("nsga2: generations must be >= 1");
    const std::size_t n = static_cast<std::size_t>(cfg.population_size);
    const auto d = static_cast<Eigen::Index>(bounds.dim());
    const double pm = cfg.mutation_prob.value_or(1.0 / static_cast<double>(d));

    Rng rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::vector<Individual> pop;
    pop.reserve(n);
    for (const auto& s : seeds) {
        if (pop.size() >= n)
            break;
        if (s.size() != d)
            throw DimensionError("nsga2: seed dimension mismatch");
        pop.push_back({s.cwiseMax(bounds.lower).cwiseMin(bounds.upper), {}, 0, 0.0});
    }
    while (pop.size() < n) {
        InputVector u(d);
        for (Eigen::Index i = 0; i < d; ++i)
            u[i] = unif(rng);
        pop.push_back({bounds.from_unit(u), {}, 0, 0.0});
    }
    for (auto& ind : pop)
        ind.f = score(ind.x);
    rank_population(pop);

    for (int gen = 0; gen < cfg.generations; ++gen) {
        std::vector<Individual> offspring;
        offspring.reserve(n + 1);
        while (offspring.size() < n) {
            const auto& a = pop[tournament(pop, rng)];
            const auto& b = pop[tournament(pop, rng)];
            auto [c1, c2] = sbx_crossover(a.x, b.x, bounds, cfg.crossover_eta, cfg.crossover_prob, rng);
            offspring.push_back({polynomial_mutation(c1, bounds, cfg.mutation_eta, pm, rng), {}, 0, 0.0});
            if (offspring.size() < n)
                offspring.push_back({polynomial_mutation(c2, bounds, cfg.mutation_eta, pm, rng), {}, 0, 0.0});
        }
        for (auto& ind : offspring)
            ind.f = score(ind.x);

        std::vector<Individual> merged = std::move(pop);
        merged.insert(merged.end(), std::make_move_iterator(offspring.begin()),
                      std::make_move_iterator(offspring.end()));
        pop = survive(std::move(merged), n);

        if (observer) {
            std::vector<Eigen::VectorXd> fs;
            fs.reserve(pop.size());
            for (const auto& ind : pop)
                fs.push_back(ind.f);
            observer(gen, fs);
        }
    }

    CheapParetoSet out;
    for (const auto& ind : pop) {
        if (ind.rank != 0)
            continue;
        const bool dup = std::any_of(out.inputs.begin(), out.inputs.end(),
                                     [&](const InputVector& x) { return x == ind.x; });
        if (dup)
            continue;
        out.inputs.push_back(ind.x);
        out.cheap_scores.push_back(ind.f);
    }
    return out;
}

CheapParetoSet solve_cheap_moo(const Acquisition& af, const Bounds& bounds, const Config& cfg,
                               const std::vector<InputVector>& seeds)
{
    return solve([&af](const InputVector& x) { return af.scores(x); }, bounds, cfg, seeds);
}

} // namespace pdbo::nsga2

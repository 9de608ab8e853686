#include "pdbo/core.hpp"

#include <algorithm>
#include <string>

namespace pdbo {

bool Bounds::contains(const InputVector& x) const
{
    if (x.size() != lower.size())
        return false;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (!(x[i] >= lower[i] && x[i] <= upper[i]))
            return false;
    return true;
}

InputVector Bounds::from_unit(const InputVector& u) const
{
    return lower.array() + u.array() * (upper - lower).array();
}

InputVector Bounds::to_unit(const InputVector& x) const
{
    return (x - lower).array() / (upper - lower).array();
}

Bounds Bounds::unit(std::size_t d)
{
    const auto n = static_cast<Eigen::Index>(d);
    return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Ones(n)};
}

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b)
{
    if (a.size() != b.size())
        throw DimensionError("dominates: length mismatch (" + std::to_string(a.size()) + " vs "
                             + std::to_string(b.size()) + ")");
    bool strict = false;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a[i] > b[i])
            return false;
        if (a[i] < b[i])
            strict = true;
    }
    return strict;
}

std::vector<std::size_t> nondominated_front(const std::vector<ObjectiveVector>& points)
{
    const std::size_t n = points.size();
    if (n == 0)
        return {};

    // Sweep in lexicographic order: a point can only be dominated by one that
    // precedes it lexicographically, so each candidate is checked against the
    // front found so far.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& pa = points[a];
        const auto& pb = points[b];
        for (Eigen::Index k = 0; k < pa.size(); ++k) {
            if (pa[k] != pb[k])
                return pa[k] < pb[k];
        }
        return false;
    });

    std::vector<std::size_t> front;
    for (std::size_t idx : order) {
        bool dominated = false;
        for (std::size_t f : front) {
            if (dominates(points[f], points[idx])) {
                dominated = true;
                break;
            }
        }
        if (!dominated)
            front.push_back(idx);
    }
    std::sort(front.begin(), front.end());
    return front;
}

void EvaluatedDataset::add(InputVector x, ObjectiveVector y, int iteration)
{
    if (!outputs_.empty() && outputs_.front().size() != y.size())
        throw DimensionError("EvaluatedDataset: objective length mismatch");
    if (!inputs_.empty() && inputs_.front().size() != x.size())
        throw DimensionError("EvaluatedDataset: input length mismatch");
    inputs_.push_back(std::move(x));
    outputs_.push_back(std::move(y));
    iteration_of_.push_back(iteration);
}

Eigen::VectorXd EvaluatedDataset::objective_column(std::size_t k) const
{
    Eigen::VectorXd col(static_cast<Eigen::Index>(outputs_.size()));
    for (std::size_t i = 0; i < outputs_.size(); ++i)
        col[static_cast<Eigen::Index>(i)] = outputs_[i][static_cast<Eigen::Index>(k)];
    return col;
}

std::vector<ObjectiveVector> ParetoArchive::front(const EvaluatedDataset& data) const
{
    std::vector<ObjectiveVector> out;
    out.reserve(indices.size());
    for (std::size_t i : indices)
        out.push_back(data.outputs()[i]);
    return out;
}

std::vector<InputVector> ParetoArchive::pareto_set(const EvaluatedDataset& data) const
{
    std::vector<InputVector> out;
    out.reserve(indices.size());
    for (std::size_t i : indices)
        out.push_back(data.inputs()[i]);
    return out;
}

ParetoArchive update_archive(const ParetoArchive& archive, const EvaluatedDataset& data,
                             const std::vector<std::size_t>& new_indices)
{
    std::vector<std::size_t> pool = archive.indices;
    for (std::size_t i : new_indices) {
        if (i >= data.size())
            throw std::out_of_range("update_archive: index " + std::to_string(i) + " out of range");
        pool.push_back(i);
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

    std::vector<ObjectiveVector> pts;
    pts.reserve(pool.size());
    for (std::size_t i : pool)
        pts.push_back(data.outputs()[i]);

    ParetoArchive out;
    for (std::size_t local : nondominated_front(pts))
        out.indices.push_back(pool[local]);
    return out;
}

} // namespace pdbo

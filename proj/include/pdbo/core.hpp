#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "pdbo/errors.hpp"

namespace pdbo {

/// Design variables, length d.
using InputVector = Eigen::VectorXd;
/// Objective values, length K. All objectives are minimized.
using ObjectiveVector = Eigen::VectorXd;

/// Axis-aligned box bounds for the input space.
struct Bounds {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    std::size_t dim() const { return static_cast<std::size_t>(lower.size()); }
    bool contains(const InputVector& x) const;
    /// Map a point of the unit cube into the box.
    InputVector from_unit(const InputVector& u) const;
    /// Map a point of the box into the unit cube.
    InputVector to_unit(const InputVector& x) const;

    static Bounds unit(std::size_t d);
};

/// True iff `a` Pareto-dominates `b` under minimization: a <= b everywhere and
/// a < b somewhere. Throws DimensionError on length mismatch.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

/// Indices of the points not dominated by any other point, in input order.
/// Exact duplicates do not dominate each other, so all copies are kept.
std::vector<std::size_t> nondominated_front(const std::vector<ObjectiveVector>& points);

/// History of evaluated (input, objective) pairs.
class EvaluatedDataset {
public:
    EvaluatedDataset() = default;

    void add(InputVector x, ObjectiveVector y, int iteration);

    std::size_t size() const { return inputs_.size(); }
    bool empty() const { return inputs_.empty(); }

    const std::vector<InputVector>& inputs() const { return inputs_; }
    const std::vector<ObjectiveVector>& outputs() const { return outputs_; }
    const std::vector<int>& iteration_of() const { return iteration_of_; }

    /// Column of objective `k` across all points.
    Eigen::VectorXd objective_column(std::size_t k) const;

private:
    std::vector<InputVector> inputs_;
    std::vector<ObjectiveVector> outputs_;
    std::vector<int> iteration_of_;
};

/// Indices into an EvaluatedDataset whose outputs are mutually non-dominated
/// and which together dominate every other point of the dataset.
struct ParetoArchive {
    std::vector<std::size_t> indices;

    std::vector<ObjectiveVector> front(const EvaluatedDataset& data) const;
    std::vector<InputVector> pareto_set(const EvaluatedDataset& data) const;
};

/// Insert `new_indices` of `data` into `archive`, evicting points they dominate.
/// The result is sorted by index, so insertion order does not matter.
ParetoArchive update_archive(const ParetoArchive& archive, const EvaluatedDataset& data,
                             const std::vector<std::size_t>& new_indices);

} // namespace pdbo

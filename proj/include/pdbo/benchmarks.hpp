#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pdbo/core.hpp"
#include "pdbo/metrics.hpp"

namespace pdbo::benchmarks {

/// A box-bounded synthetic test problem. Every objective is minimized.
struct ProblemSpec {
    std::string name;
    std::size_t d = 0;
    std::size_t k = 0;
    Bounds bounds;
    ReferencePoint reference_point;
    std::function<ObjectiveVector(const InputVector&)> fn;

    /// Throws DomainError if `x` has the wrong length or leaves the box.
    ObjectiveVector evaluate(const InputVector& x) const;
};

ObjectiveVector zdt1(const InputVector& x);
ObjectiveVector zdt2(const InputVector& x);
ObjectiveVector zdt3(const InputVector& x);
ObjectiveVector dtlz1(const InputVector& x, std::size_t k);
ObjectiveVector dtlz3(const InputVector& x, std::size_t k);
ObjectiveVector dtlz5(const InputVector& x, std::size_t k);
/// Three-objective gear train design; the four teeth counts are rounded to integers.
ObjectiveVector gear_train(const InputVector& x);

/// Names accepted by make_problem.
const std::vector<std::string>& problem_names();

/// Look up a problem by name ("zdt1", "dtlz3", "gear-train", ...). `d`
/// overrides the default input dimension where the suite allows it.
/// Throws LookupError for unknown names.
ProblemSpec make_problem(std::string_view name, std::optional<std::size_t> d = std::nullopt);

/// All problems at their default sizes.
std::vector<ProblemSpec> problem_registry();

} // namespace pdbo::benchmarks

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pdbo/core.hpp"

namespace pdbo {

/// Anchor for hypervolume; points must be strictly below it in every
/// objective to contribute.
struct ReferencePoint {
    Eigen::VectorXd values;

    std::size_t size() const { return static_cast<std::size_t>(values.size()); }
};

namespace metrics {

/// Exact hypervolume of the region dominated by `points` and bounded by `r`,
/// by recursive slicing along the last objective. Points not strictly
/// dominating `r` are ignored; empty input gives 0.
double hypervolume(const std::vector<ObjectiveVector>& points, const ReferencePoint& r);

/// Exclusive contribution HV(P) - HV(P \ {p}) of every point. Dominated points
/// and exact duplicates get 0.
std::vector<double> hvc(const std::vector<ObjectiveVector>& points, const ReferencePoint& r);

enum class DpfMode { AllEvaluated, FrontOnly };

std::string to_string(DpfMode mode);
DpfMode parse_dpf_mode(std::string_view name);

/// Mean pairwise Euclidean distance over `outputs` (AllEvaluated) or over
/// their non-dominated subset (FrontOnly). Fewer than 2 points gives 0.
double dpf(const std::vector<ObjectiveVector>& outputs, DpfMode mode = DpfMode::AllEvaluated);

/// Mean over reference-front points of the distance to the nearest point of `front`.
double igd(const std::vector<ObjectiveVector>& front,
           const std::vector<ObjectiveVector>& reference_front);

/// Below this previous-front hypervolume the improvement is reported in
/// absolute rather than relative terms.
inline constexpr double kHvDenominatorFloor = 1e-12;

/// (HV(prev ∪ candidates) - HV(prev)) / HV(prev), or the bare numerator when
/// HV(prev) < kHvDenominatorFloor. Never negative.
double relative_hv_improvement(double prev_front_hv, const std::vector<ObjectiveVector>& prev_front,
                               const std::vector<ObjectiveVector>& candidate_outputs,
                               const ReferencePoint& r);

} // namespace metrics
} // namespace pdbo

#include "pdbo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pdbo::metrics {

namespace {

using Point = std::vector<double>;

// a weakly dominates b on the first k coordinates.
bool weakly_dominates(const Point& a, const Point& b, std::size_t k)
{
    for (std::size_t i = 0; i < k; ++i)
        if (a[i] > b[i])
            return false;
    return true;
}

// Hypervolume of mutually non-dominated `pts` over their first k coordinates.
double hv_recursive(std::vector<Point> pts, const std::vector<double>& ref, std::size_t k)
{
    if (pts.empty())
        return 0.0;
    if (k == 1) {
        double lo = pts.front()[0];
        for (const auto& p : pts)
            lo = std::min(lo, p[0]);
        return ref[0] - lo;
    }

    const std::size_t last = k - 1;
    std::sort(pts.begin(), pts.end(), [last](const Point& a, const Point& b) { return a[last] < b[last]; });

    double volume = 0.0;
    std::vector<Point> slice; // non-dominated projections onto the first k-1 coordinates
    double running_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double upper = (i + 1 < pts.size()) ? pts[i + 1][last] : ref[last];
        const Point& p = pts[i];
        double area = 0.0;
        if (k == 2) {
            running_min = std::min(running_min, p[0]);
            area = ref[0] - running_min;
        } else {
            bool covered = false;
            for (const auto& q : slice) {
                if (weakly_dominates(q, p, last)) {
                    covered = true;
                    break;
                }
            }
            if (!covered) {
                std::erase_if(slice, [&](const Point& q) { return weakly_dominates(p, q, last); });
                slice.push_back(p);
            }
            if (upper > p[last])
                area = hv_recursive(slice, ref, last);
        }
        const double thickness = upper - p[last];
        if (thickness > 0.0)
            volume += area * thickness;
    }
    return volume;
}

std::vector<Point> filtered(const std::vector<ObjectiveVector>& points, const ReferencePoint& r)
{
    const Eigen::Index k = r.values.size();
    std::vector<ObjectiveVector> inside;
    for (const auto& p : points) {
        if (p.size() != k)
            throw DimensionError("hypervolume: point and reference differ in length");
        if ((p.array() < r.values.array()).all())
            inside.push_back(p);
    }
    std::vector<Point> out;
    for (std::size_t i : nondominated_front(inside)) {
        Point q(inside[i].data(), inside[i].data() + k);
        // Exact duplicates add no volume.
        if (std::find(out.begin(), out.end(), q) == out.end())
            out.push_back(std::move(q));
    }
    return out;
}

} // namespace

double hypervolume(const std::vector<ObjectiveVector>& points, const ReferencePoint& r)
{
    if (r.values.size() == 0)
        throw DimensionError("hypervolume: empty reference point");
    auto pts = filtered(points, r);
    if (pts.empty())
        return 0.0;
    const std::vector<double> ref(r.values.data(), r.values.data() + r.values.size());
    return hv_recursive(std::move(pts), ref, ref.size());
}

std::vector<double> hvc(const std::vector<ObjectiveVector>& points, const ReferencePoint& r)
{
    std::vector<double> out(points.size(), 0.0);
    if (points.empty())
        return out;
    const double total = hypervolume(points, r);
    const auto front = nondominated_front(points);
    std::vector<ObjectiveVector> rest;
    rest.reserve(points.size());
    for (std::size_t i : front) {
        if (!(points[i].array() < r.values.array()).all())
            continue;
        rest.clear();
        for (std::size_t j : front)
            if (j != i)
                rest.push_back(points[j]);
        out[i] = std::max(0.0, total - hypervolume(rest, r));
    }
    return out;
}

std::string to_string(DpfMode mode)
{
    return mode == DpfMode::AllEvaluated ? "all" : "front";
}

DpfMode parse_dpf_mode(std::string_view name)
{
    if (name == "all" || name == "all_evaluated" || name == "all-evaluated")
        return DpfMode::AllEvaluated;
    if (name == "front" || name == "front_only" || name == "front-only")
        return DpfMode::FrontOnly;
    throw LookupError("unknown DPF mode '" + std::string(name) + "'");
}

double dpf(const std::vector<ObjectiveVector>& outputs, DpfMode mode)
{
    std::vector<const ObjectiveVector*> pts;
    if (mode == DpfMode::FrontOnly) {
        for (std::size_t i : nondominated_front(outputs))
            pts.push_back(&outputs[i]);
    } else {
        for (const auto& y : outputs)
            pts.push_back(&y);
    }
    if (pts.size() < 2)
        return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            sum += (*pts[i] - *pts[j]).norm();
    const double pairs = 0.5 * static_cast<double>(pts.size()) * static_cast<double>(pts.size() - 1);
    return sum / pairs;
}

double igd(const std::vector<ObjectiveVector>& front,
           const std::vector<ObjectiveVector>& reference_front)
{
    if (front.empty() || reference_front.empty())
        throw ParameterError("igd: both fronts must be non-empty");
    double sum = 0.0;
    for (const auto& ref : reference_front) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : front) {
            if (p.size() != ref.size())
                throw DimensionError("igd: objective length mismatch");
            best = std::min(best, (p - ref).norm());
        }
        sum += best;
    }
    return sum / static_cast<double>(reference_front.size());
}

double relative_hv_improvement(double prev_front_hv, const std::vector<ObjectiveVector>& prev_front,
                               const std::vector<ObjectiveVector>& candidate_outputs,
                               const ReferencePoint& r)
{
    if (candidate_outputs.empty())
        return 0.0;
    std::vector<ObjectiveVector> uni = prev_front;
    uni.insert(uni.end(), candidate_outputs.begin(), candidate_outputs.end());
    const double gain = std::max(0.0, hypervolume(uni, r) - prev_front_hv);
    if (prev_front_hv < kHvDenominatorFloor)
        return gain;
    return gain / prev_front_hv;
}

} // namespace pdbo::metrics

#pragma once

#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "pdbo/core.hpp"
#include "pdbo/gp.hpp"
#include "pdbo/metrics.hpp"

namespace pdbo::bandit {

/// How immediate rewards are computed.
///  - RelativeHv: relative hypervolume improvement of each arm's previous
///    batch (predicted means) over the front it was nominated against.
///  - SumPosteriorMean: negated sum of posterior means over the batch, used
///    without discounting or normalization.
enum class RewardMode { RelativeHv, SumPosteriorMean };

std::string to_string(RewardMode mode);
RewardMode parse_reward_mode(std::string_view name);

struct BanditConfig {
    double gamma = 0.7;
    double eta = 4.0;
    /// Min-max normalize the discounted reward against each arm's history.
    bool normalize = true;
};

/// Discounted, normalized full-information Hedge over M arms.
class BanditState {
public:
    BanditState(std::size_t arms, BanditConfig cfg = {});

    /// Apply one round of immediate rewards (one per arm).
    void update(const std::vector<double>& immediate);
    /// Categorical draw from the current probabilities.
    std::size_t select_arm(std::mt19937_64& rng) const;

    std::size_t arms() const { return g_.size(); }
    int rounds() const { return rounds_; }
    const BanditConfig& config() const { return cfg_; }
    const std::vector<double>& cumulative() const { return g_; }
    const std::vector<double>& g_max() const { return g_max_; }
    const std::vector<double>& g_min() const { return g_min_; }
    const std::vector<double>& normalized() const { return r_; }
    const std::vector<double>& probabilities() const { return p_; }

private:
    BanditConfig cfg_;
    int rounds_ = 0;
    std::vector<double> g_;
    std::vector<double> g_max_;
    std::vector<double> g_min_;
    std::vector<double> r_;
    std::vector<double> p_;
};

/// exp(eta r_j) / sum_l exp(eta r_l), computed with the max subtracted.
std::vector<double> softmax(const std::vector<double>& r, double eta);

/// Batch nominated by one arm in an earlier iteration, together with the
/// front (and its hypervolume) that was current when it was nominated.
struct PreviousNomination {
    std::vector<std::vector<InputVector>> batches; // one per arm
    std::vector<ObjectiveVector> front;
    double front_hv = 0.0;
};

/// Immediate rewards for every arm. Returns zeros when `previous` holds no
/// batches (first iteration). `gps` must be refit on the latest data.
std::vector<double> compute_immediate_rewards(const std::vector<gp::GaussianSurrogate>& gps,
                                              const PreviousNomination& previous,
                                              std::size_t arms, const ReferencePoint& r,
                                              RewardMode mode);

} // namespace pdbo::bandit

#include "pdbo/bandit.hpp"

#include <algorithm>
#include <cmath>

namespace pdbo::bandit {

std::string to_string(RewardMode mode)
{
    return mode == RewardMode::RelativeHv ? "relative-hv" : "spm";
}

RewardMode parse_reward_mode(std::string_view name)
{
    if (name == "relative-hv" || name == "relative_hv")
        return RewardMode::RelativeHv;
    if (name == "spm" || name == "sum-posterior-mean")
        return RewardMode::SumPosteriorMean;
    throw LookupError("unknown reward mode '" + std::string(name) + "'");
}

std::vector<double> softmax(const std::vector<double>& r, double eta)
{
    std::vector<double> p(r.size());
    if (r.empty())
        return p;
    const double top = *std::max_element(r.begin(), r.end());
    double z = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) {
        p[j] = std::exp(eta * (r[j] - top));
        z += p[j];
    }
    for (double& v : p)
        v /= z;
    return p;
}

BanditState::BanditState(std::size_t arms, BanditConfig cfg)
    : cfg_(cfg), g_(arms, 0.0), g_max_(arms, 0.0), g_min_(arms, 0.0), r_(arms, 0.0),
      p_(arms, arms ? 1.0 / static_cast<double>(arms) : 0.0)
{
    if (arms == 0)
        throw ParameterError("bandit: need at least one arm");
    if (!(cfg_.gamma > 0.0 && cfg_.gamma <= 1.0))
        throw ParameterError("bandit: gamma must lie in (0, 1]");
    if (!(cfg_.eta > 0.0))
        throw ParameterError("bandit: eta must be positive");
}

void BanditState::update(const std::vector<double>& immediate)
{
    if (immediate.size() != g_.size())
        throw DimensionError("bandit: expected one reward per arm");
    for (std::size_t j = 0; j < g_.size(); ++j) {
        g_[j] = cfg_.gamma * g_[j] + immediate[j];
        if (rounds_ == 0) {
            g_max_[j] = g_[j];
            g_min_[j] = g_[j];
        } else {
            g_max_[j] = std::max(g_max_[j], g_[j]);
            g_min_[j] = std::min(g_min_[j], g_[j]);
        }
        if (cfg_.normalize) {
            const double span = g_max_[j] - g_min_[j];
            r_[j] = span > 0.0 ? (g_[j] - g_max_[j]) / span : 0.0;
        } else {
            r_[j] = g_[j];
        }
    }
    ++rounds_;
    p_ = softmax(r_, cfg_.eta);
}

std::size_t BanditState::select_arm(std::mt19937_64& rng) const
{
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double acc = 0.0;
    for (std::size_t j = 0; j < p_.size(); ++j) {
        acc += p_[j];
        if (u < acc)
            return j;
    }
    // Rounding left u above the accumulated mass: last arm with mass.
    for (std::size_t j = p_.size(); j-- > 0;)
        if (p_[j] > 0.0)
            return j;
    return 0;
}

std::vector<double> compute_immediate_rewards(const std::vector<gp::GaussianSurrogate>& gps,
                                              const PreviousNomination& previous,
                                              std::size_t arms, const ReferencePoint& r,
                                              RewardMode mode)
{
    std::vector<double> out(arms, 0.0);
    if (previous.batches.empty())
        return out;
    if (previous.batches.size() != arms)
        throw DimensionError("compute_immediate_rewards: expected one batch per arm");

    for (std::size_t j = 0; j < arms; ++j) {
        const auto& batch = previous.batches[j];
        if (mode == RewardMode::SumPosteriorMean) {
            double s = 0.0;
            for (const auto& x : batch)
                for (const auto& gp : gps)
                    s += gp.predict_mean(x);
            // Objectives are minimized: a smaller predicted sum is a larger reward.
            out[j] = -s;
            continue;
        }
        std::vector<ObjectiveVector> predicted;
        predicted.reserve(batch.size());
        for (const auto& x : batch) {
            ObjectiveVector y(static_cast<Eigen::Index>(gps.size()));
            for (std::size_t i = 0; i < gps.size(); ++i)
                y[static_cast<Eigen::Index>(i)] = gps[i].predict_mean(x);
            predicted.push_back(std::move(y));
        }
        out[j] = metrics::relative_hv_improvement(previous.front_hv, previous.front, predicted, r);
    }
    return out;
}

} // namespace pdbo::bandit

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "pdbo/gp.hpp"

namespace pdbo {

/// Members of the acquisition portfolio. Every score is oriented so that
/// smaller is better.
enum class AcquisitionKind { EI, TS, UCB, ID };

std::string to_string(AcquisitionKind kind);
/// Case-insensitive; accepts "ei", "ts", "ucb" (or "lcb"), "id".
AcquisitionKind parse_acquisition(std::string_view name);
/// Parse a comma-separated portfolio such as "ei,ts,ucb,id".
std::vector<AcquisitionKind> parse_portfolio(std::string_view list);
const std::vector<AcquisitionKind>& default_portfolio();

/// 2 log(d t^2 pi^2 / (6 delta)), t >= 1.
double beta_schedule(int t, std::size_t d, double delta = 0.1);

/// Negated expected improvement below incumbent `tau`; 0 when std is 0.
double ei_score(double mean, double std, double tau);
/// Lower confidence bound mean - sqrt(beta) std.
double lcb_score(double mean, double std, double beta);

struct AcquisitionParams {
    int iteration = 1;
    /// Per-objective incumbent (minimum observed value); used by EI.
    Eigen::VectorXd incumbents;
    int ts_features = 500;
    /// Seed for the per-iteration Thompson samples; objective i uses seed + i.
    std::uint64_t ts_seed = 0;
};

/// One acquisition function applied to each of the K surrogates, with its
/// per-iteration state (beta_t, incumbents, or posterior samples) frozen at
/// construction. Read-only afterwards.
class Acquisition {
public:
    Acquisition(AcquisitionKind kind, const std::vector<gp::GaussianSurrogate>& gps,
                const AcquisitionParams& params);

    AcquisitionKind kind() const { return kind_; }
    std::size_t num_objectives() const { return gps_->size(); }
    double beta() const { return beta_; }

    /// Score of objective `i` at `x`.
    double score(std::size_t i, const InputVector& x) const;
    /// Scores of all objectives at `x`.
    Eigen::VectorXd scores(const InputVector& x) const;

private:
    AcquisitionKind kind_;
    const std::vector<gp::GaussianSurrogate>* gps_;
    Eigen::VectorXd incumbents_;
    double beta_ = 0.0;
    std::vector<gp::SampledFunction> samples_;
};

} // namespace pdbo

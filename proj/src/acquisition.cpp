#include "pdbo/acquisition.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

namespace pdbo {

std::string to_string(AcquisitionKind kind)
{
    switch (kind) {
    case AcquisitionKind::EI: return "ei";
    case AcquisitionKind::TS: return "ts";
    case AcquisitionKind::UCB: return "ucb";
    case AcquisitionKind::ID: return "id";
    }
    return "?";
}

AcquisitionKind parse_acquisition(std::string_view name)
{
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "ei")
        return AcquisitionKind::EI;
    if (s == "ts")
        return AcquisitionKind::TS;
    if (s == "ucb" || s == "lcb")
        return AcquisitionKind::UCB;
    if (s == "id")
        return AcquisitionKind::ID;
    throw LookupError("unknown acquisition function '" + std::string(name) + "'");
}

std::vector<AcquisitionKind> parse_portfolio(std::string_view list)
{
    std::vector<AcquisitionKind> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        const std::size_t end = std::min(list.find(',', start), list.size());
        const auto item = list.substr(start, end - start);
        if (!item.empty())
            out.push_back(parse_acquisition(item));
        start = end + 1;
    }
    if (out.empty())
        throw ParameterError("empty acquisition portfolio");
    return out;
}

const std::vector<AcquisitionKind>& default_portfolio()
{
    static const std::vector<AcquisitionKind> p{AcquisitionKind::EI, AcquisitionKind::TS,
                                                AcquisitionKind::UCB, AcquisitionKind::ID};
    return p;
}

double beta_schedule(int t, std::size_t d, double delta)
{
    if (t < 1)
        throw ParameterError("beta_schedule: iteration must be >= 1");
    const double td = static_cast<double>(t);
    return 2.0
           * std::log(static_cast<double>(d) * td * td * std::numbers::pi * std::numbers::pi
                      / (6.0 * delta));
}

double ei_score(double mean, double std, double tau)
{
    if (!(std > 0.0))
        return 0.0;
    const double a = (tau - mean) / std;
    const double cdf = 0.5 * std::erfc(-a / std::numbers::sqrt2);
    const double pdf = std::exp(-0.5 * a * a) / std::sqrt(2.0 * std::numbers::pi);
    return -std * (a * cdf + pdf);
}

double lcb_score(double mean, double std, double beta)
{
    return mean - std::sqrt(beta) * std;
}

Acquisition::Acquisition(AcquisitionKind kind, const std::vector<gp::GaussianSurrogate>& gps,
                         const AcquisitionParams& params)
    : kind_(kind), gps_(&gps), incumbents_(params.incumbents)
{
    if (gps.empty())
        throw ParameterError("Acquisition: no surrogates");
    switch (kind_) {
    case AcquisitionKind::EI:
        if (static_cast<std::size_t>(incumbents_.size()) != gps.size())
            throw DimensionError("Acquisition: EI needs one incumbent per objective");
        break;
    case AcquisitionKind::UCB:
        beta_ = beta_schedule(params.iteration, gps.front().input_dim());
        break;
    case AcquisitionKind::TS:
        samples_.reserve(gps.size());
        for (std::size_t i = 0; i < gps.size(); ++i)
            samples_.push_back(gps[i].sample_function(params.ts_features, params.ts_seed + i));
        break;
    case AcquisitionKind::ID:
        break;
    }
}

double Acquisition::score(std::size_t i, const InputVector& x) const
{
    const auto& gp = (*gps_)[i];
    switch (kind_) {
    case AcquisitionKind::EI: {
        const auto p = gp.predict(x);
        return ei_score(p.mean, p.std, incumbents_[static_cast<Eigen::Index>(i)]);
    }
    case AcquisitionKind::UCB: {
        const auto p = gp.predict(x);
        return lcb_score(p.mean, p.std, beta_);
    }
    case AcquisitionKind::TS:
        return samples_[i](x);
    case AcquisitionKind::ID:
        return gp.predict_mean(x);
    }
    return 0.0;
}

Eigen::VectorXd Acquisition::scores(const InputVector& x) const
{
    Eigen::VectorXd s(static_cast<Eigen::Index>(gps_->size()));
    for (std::size_t i = 0; i < gps_->size(); ++i)
        s[static_cast<Eigen::Index>(i)] = score(i, x);
    return s;
}

} // namespace pdbo

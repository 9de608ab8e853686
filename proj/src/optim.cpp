#include "pdbo/optim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <vector>

namespace pdbo::optim {

namespace {

double safe_eval(const Objective& f, const Eigen::VectorXd& x, Eigen::VectorXd& g)
{
    const double v = f(x, g);
    if (!std::isfinite(v) || !g.allFinite())
        return std::numeric_limits<double>::infinity();
    return v;
}

} // namespace

LbfgsResult minimize(const Objective& f, Eigen::VectorXd x0, const LbfgsOptions& opts)
{
    const Eigen::Index n = x0.size();
    LbfgsResult res;
    res.x = std::move(x0);
    Eigen::VectorXd g(n);
    res.value = safe_eval(f, res.x, g);
    if (!std::isfinite(res.value))
        return res;

    std::deque<Eigen::VectorXd> s_hist, y_hist;
    std::deque<double> rho_hist;

    Eigen::VectorXd g_new(n), x_new(n);
    for (int it = 0; it < opts.max_iterations; ++it) {
        res.iterations = it + 1;
        if (g.lpNorm<Eigen::Infinity>() < opts.grad_tolerance) {
            res.converged = true;
            break;
        }

        // Two-loop recursion.
        Eigen::VectorXd q = g;
        const std::size_t m = s_hist.size();
        std::vector<double> alpha(m);
        for (std::size_t i = m; i-- > 0;) {
            alpha[i] = rho_hist[i] * s_hist[i].dot(q);
            q -= alpha[i] * y_hist[i];
        }
        double gamma = 1.0;
        if (m > 0)
            gamma = s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
        Eigen::VectorXd dir = gamma * q;
        for (std::size_t i = 0; i < m; ++i) {
            const double beta = rho_hist[i] * y_hist[i].dot(dir);
            dir += s_hist[i] * (alpha[i] - beta);
        }
        dir = -dir;

        double slope = g.dot(dir);
        if (!(slope < 0.0)) {
            // Not a descent direction; restart from steepest descent.
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            dir = -g;
            slope = -g.squaredNorm();
        }

        double step = 1.0;
        if (m == 0)
            step = std::min(1.0, 1.0 / std::max(g.lpNorm<Eigen::Infinity>(), 1e-12));

        double v_new = std::numeric_limits<double>::infinity();
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            x_new = res.x + step * dir;
            v_new = safe_eval(f, x_new, g_new);
            if (v_new <= res.value + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted)
            break;

        Eigen::VectorXd s = x_new - res.x;
        Eigen::VectorXd y = g_new - g;
        const double sy = s.dot(y);
        const double prev = res.value;
        res.x = x_new;
        res.value = v_new;
        g = g_new;

        if (sy > 1e-12 * y.squaredNorm()) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(y));
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > opts.history) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }

        if (std::abs(prev - v_new) <= opts.rel_tolerance * std::max(1.0, std::abs(prev))) {
            res.converged = true;
            break;
        }
    }
    return res;
}

} // namespace pdbo::optim

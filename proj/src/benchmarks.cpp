#include "pdbo/benchmarks.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

namespace pdbo::benchmarks {

namespace {

constexpr double kPi = std::numbers::pi;

double zdt_g(const InputVector& x)
{
    const Eigen::Index n = x.size();
    return 1.0 + 9.0 * x.tail(n - 1).sum() / static_cast<double>(n - 1);
}

// Rastrigin-like distance function shared by DTLZ1 and DTLZ3.
double dtlz_rastrigin_g(const InputVector& x, std::size_t k)
{
    const auto tail = static_cast<Eigen::Index>(x.size() - static_cast<Eigen::Index>(k) + 1);
    double s = 0.0;
    for (Eigen::Index i = x.size() - tail; i < x.size(); ++i) {
        const double z = x[i] - 0.5;
        s += z * z - std::cos(20.0 * kPi * z);
    }
    return 100.0 * (static_cast<double>(tail) + s);
}

// Spherical front: f_m = (1+g) prod cos(theta) * sin(theta), angles in radians.
ObjectiveVector spherical(const Eigen::VectorXd& theta, double g, std::size_t k)
{
    const auto m = static_cast<Eigen::Index>(k);
    ObjectiveVector f(m);
    for (Eigen::Index obj = 0; obj < m; ++obj) {
        double v = 1.0 + g;
        for (Eigen::Index i = 0; i < m - 1 - obj; ++i)
            v *= std::cos(theta[i]);
        if (obj > 0)
            v *= std::sin(theta[m - 1 - obj]);
        f[obj] = v;
    }
    return f;
}

void require_dtlz_dims(const InputVector& x, std::size_t k)
{
    if (k < 2 || static_cast<std::size_t>(x.size()) < k)
        throw DimensionError("DTLZ: need K >= 2 and d >= K");
}

ReferencePoint constant_ref(std::size_t k, double v)
{
    return {Eigen::VectorXd::Constant(static_cast<Eigen::Index>(k), v)};
}

std::string normalize_name(std::string_view name)
{
    std::string s;
    for (char c : name) {
        if (c == '-' || c == '_')
            continue;
        s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return s;
}

} // namespace

ObjectiveVector ProblemSpec::evaluate(const InputVector& x) const
{
    if (static_cast<std::size_t>(x.size()) != d)
        throw DomainError(name + ": expected input of length " + std::to_string(d));
    if (!bounds.contains(x))
        throw DomainError(name + ": input outside box bounds");
    return fn(x);
}

ObjectiveVector zdt1(const InputVector& x)
{
    const double f1 = x[0];
    const double g = zdt_g(x);
    ObjectiveVector f(2);
    f << f1, g * (1.0 - std::sqrt(f1 / g));
    return f;
}

ObjectiveVector zdt2(const InputVector& x)
{
    const double f1 = x[0];
    const double g = zdt_g(x);
    const double q = f1 / g;
    ObjectiveVector f(2);
    f << f1, g * (1.0 - q * q);
    return f;
}

ObjectiveVector zdt3(const InputVector& x)
{
    const double f1 = x[0];
    const double g = zdt_g(x);
    const double q = f1 / g;
    ObjectiveVector f(2);
    f << f1, g * (1.0 - std::sqrt(q) - q * std::sin(10.0 * kPi * f1));
    return f;
}

ObjectiveVector dtlz1(const InputVector& x, std::size_t k)
{
    require_dtlz_dims(x, k);
    const double g = dtlz_rastrigin_g(x, k);
    const auto m = static_cast<Eigen::Index>(k);
    ObjectiveVector f(m);
    for (Eigen::Index obj = 0; obj < m; ++obj) {
        double v = 0.5 * (1.0 + g);
        for (Eigen::Index i = 0; i < m - 1 - obj; ++i)
            v *= x[i];
        if (obj > 0)
            v *= 1.0 - x[m - 1 - obj];
        f[obj] = v;
    }
    return f;
}

ObjectiveVector dtlz3(const InputVector& x, std::size_t k)
{
    require_dtlz_dims(x, k);
    const double g = dtlz_rastrigin_g(x, k);
    const Eigen::VectorXd theta = x.head(static_cast<Eigen::Index>(k) - 1) * (kPi / 2.0);
    return spherical(theta, g, k);
}

ObjectiveVector dtlz5(const InputVector& x, std::size_t k)
{
    require_dtlz_dims(x, k);
    const auto m = static_cast<Eigen::Index>(k);
    double g = 0.0;
    for (Eigen::Index i = m - 1; i < x.size(); ++i)
        g += (x[i] - 0.5) * (x[i] - 0.5);
    Eigen::VectorXd theta(m - 1);
    theta[0] = x[0] * kPi / 2.0;
    for (Eigen::Index i = 1; i < m - 1; ++i)
        theta[i] = kPi / (4.0 * (1.0 + g)) * (1.0 + 2.0 * g * x[i]);
    return spherical(theta, g, k);
}

ObjectiveVector gear_train(const InputVector& x)
{
    const double x1 = std::round(x[0]);
    const double x2 = std::round(x[1]);
    const double x3 = std::round(x[2]);
    const double x4 = std::round(x[3]);
    ObjectiveVector f(3);
    f[0] = std::abs(6.931 - (x3 / x1) * (x4 / x2));
    f[1] = std::max({x1, x2, x3, x4});
    // Violation of the ratio constraint 0.5 - f1 / 6.931 >= 0.
    const double g = 0.5 - f[0] / 6.931;
    f[2] = g < 0.0 ? -g : 0.0;
    return f;
}

const std::vector<std::string>& problem_names()
{
    static const std::vector<std::string> names{"zdt1", "zdt2", "zdt3", "dtlz1",
                                                "dtlz3", "dtlz5", "gear-train"};
    return names;
}

ProblemSpec make_problem(std::string_view name, std::optional<std::size_t> d)
{
    const std::string key = normalize_name(name);
    ProblemSpec p;

    auto zdt = [&](std::string canonical, std::size_t default_d,
                   ObjectiveVector (*fn)(const InputVector&)) {
        p.name = std::move(canonical);
        p.d = d.value_or(default_d);
        if (p.d < 2)
            throw ParameterError(p.name + ": d must be >= 2");
        p.k = 2;
        p.bounds = Bounds::unit(p.d);
        p.reference_point = constant_ref(2, 11.0);
        p.fn = fn;
    };
    auto dtlz = [&](std::string canonical, std::size_t default_d, std::size_t k, double ref,
                    ObjectiveVector (*fn)(const InputVector&, std::size_t)) {
        p.name = std::move(canonical);
        p.d = d.value_or(default_d);
        if (p.d < k)
            throw ParameterError(p.name + ": d must be >= K");
        p.k = k;
        p.bounds = Bounds::unit(p.d);
        p.reference_point = constant_ref(k, ref);
        p.fn = [fn, k](const InputVector& x) { return fn(x, k); };
    };

    if (key == "zdt1") {
        zdt("zdt1", 25, &zdt1);
    } else if (key == "zdt2") {
        zdt("zdt2", 4, &zdt2);
    } else if (key == "zdt3") {
        zdt("zdt3", 12, &zdt3);
    } else if (key == "dtlz1") {
        dtlz("dtlz1", 10, 4, 400.0, &dtlz1);
    } else if (key == "dtlz3") {
        dtlz("dtlz3", 9, 4, 10000.0, &dtlz3);
    } else if (key == "dtlz5") {
        dtlz("dtlz5", 12, 6, 10.0, &dtlz5);
    } else if (key == "geartrain") {
        if (d && *d != 4)
            throw ParameterError("gear-train: input dimension is fixed at 4");
        p.name = "gear-train";
        p.d = 4;
        p.k = 3;
        p.bounds = {Eigen::VectorXd::Constant(4, 12.0), Eigen::VectorXd::Constant(4, 60.0)};
        p.reference_point.values = Eigen::Vector3d(6.6764, 59.0, 0.4633);
        p.fn = &gear_train;
    } else {
        throw LookupError("unknown problem '" + std::string(name) + "'");
    }
    return p;
}

std::vector<ProblemSpec> problem_registry()
{
    std::vector<ProblemSpec> out;
    for (const auto& n : problem_names())
        out.push_back(make_problem(n));
    return out;
}

} // namespace pdbo::benchmarks

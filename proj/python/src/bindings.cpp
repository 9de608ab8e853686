#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "pdbo/benchmarks.hpp"
#include "pdbo/dpp.hpp"
#include "pdbo/driver.hpp"
#include "pdbo/errors.hpp"
#include "pdbo/metrics.hpp"

namespace py = pybind11;
using namespace pdbo;

namespace {

// Points arrive as an (n, K) array, one point per row.
std::vector<ObjectiveVector> rows(const Eigen::MatrixXd& m)
{
    std::vector<ObjectiveVector> out;
    out.reserve(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        out.emplace_back(m.row(i).transpose());
    return out;
}

ReferencePoint ref(const Eigen::VectorXd& r)
{
    return ReferencePoint{r};
}

std::vector<std::string> names(const std::vector<AcquisitionKind>& kinds)
{
    std::vector<std::string> out;
    for (auto k : kinds)
        out.push_back(to_string(k));
    return out;
}

} // namespace

PYBIND11_MODULE(_pdbo, m)
{
    m.doc() = "Batch multi-objective Bayesian optimization with adaptive acquisition selection";

    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<LookupError>(m, "LookupError", PyExc_KeyError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    m.def("dominates", [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return dominates(a, b); },
          py::arg("a"), py::arg("b"));
    m.def("nondominated_front", [](const Eigen::MatrixXd& pts) { return nondominated_front(rows(pts)); },
          py::arg("points"));
    m.def("hypervolume",
          [](const Eigen::MatrixXd& pts, const Eigen::VectorXd& r) { return metrics::hypervolume(rows(pts), ref(r)); },
          py::arg("points"), py::arg("reference_point"));
    m.def("hvc", [](const Eigen::MatrixXd& pts, const Eigen::VectorXd& r) { return metrics::hvc(rows(pts), ref(r)); },
          py::arg("points"), py::arg("reference_point"));
    m.def(
        "dpf",
        [](const Eigen::MatrixXd& pts, const std::string& mode) {
            return metrics::dpf(rows(pts), metrics::parse_dpf_mode(mode));
        },
        py::arg("outputs"), py::arg("mode") = "all");
    m.def(
        "igd",
        [](const Eigen::MatrixXd& front, const Eigen::MatrixXd& reference) {
            return metrics::igd(rows(front), rows(reference));
        },
        py::arg("front"), py::arg("reference_front"));
    m.def("dpp_select", &dpp::dpp_select, py::arg("kernel"), py::arg("batch_size"));

    py::class_<benchmarks::ProblemSpec>(m, "Problem")
        .def_readonly("name", &benchmarks::ProblemSpec::name)
        .def_readonly("d", &benchmarks::ProblemSpec::d)
        .def_readonly("k", &benchmarks::ProblemSpec::k)
        .def_property_readonly("lower", [](const benchmarks::ProblemSpec& p) { return p.bounds.lower; })
        .def_property_readonly("upper", [](const benchmarks::ProblemSpec& p) { return p.bounds.upper; })
        .def_property_readonly("reference_point",
                               [](const benchmarks::ProblemSpec& p) { return p.reference_point.values; })
        .def("evaluate", &benchmarks::ProblemSpec::evaluate, py::arg("x"))
        .def("__repr__", [](const benchmarks::ProblemSpec& p) {
            return "<Problem " + p.name + " d=" + std::to_string(p.d) + " k=" + std::to_string(p.k) + ">";
        });
    m.def("make_problem", &benchmarks::make_problem, py::arg("name"), py::arg("d") = py::none());
    m.def("problem_registry", &benchmarks::problem_registry);

    using driver::RunConfig;
    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_readwrite("problem", &RunConfig::problem)
        .def_readwrite("dim", &RunConfig::dim)
        .def_readwrite("batch_size", &RunConfig::batch_size)
        .def_readwrite("iterations", &RunConfig::iterations)
        .def_readwrite("budget", &RunConfig::budget)
        .def_readwrite("initial_points", &RunConfig::initial_points)
        .def_readwrite("seed", &RunConfig::seed)
        .def_readwrite("gamma", &RunConfig::gamma)
        .def_readwrite("eta", &RunConfig::eta)
        .def_readwrite("population_size", &RunConfig::population_size)
        .def_readwrite("generations", &RunConfig::generations)
        .def_readwrite("ts_features", &RunConfig::ts_features)
        .def_readwrite("gp_starts", &RunConfig::gp_starts)
        .def_property(
            "portfolio", [](const RunConfig& c) { return names(c.portfolio); },
            [](RunConfig& c, const std::vector<std::string>& v) {
                c.portfolio.clear();
                for (const auto& s : v)
                    c.portfolio.push_back(parse_acquisition(s));
            })
        .def_property(
            "reward_mode", [](const RunConfig& c) { return bandit::to_string(c.reward_mode); },
            [](RunConfig& c, const std::string& s) { c.reward_mode = bandit::parse_reward_mode(s); })
        .def_property(
            "dpf_mode", [](const RunConfig& c) { return metrics::to_string(c.dpf_mode); },
            [](RunConfig& c, const std::string& s) { c.dpf_mode = metrics::parse_dpf_mode(s); })
        .def_property(
            "selection", [](const RunConfig& c) { return driver::to_string(c.selection); },
            [](RunConfig& c, const std::string& s) { c.selection = driver::parse_selection(s); })
        .def_property(
            "static_af", [](const RunConfig& c) { return to_string(c.static_af); },
            [](RunConfig& c, const std::string& s) { c.static_af = parse_acquisition(s); })
        .def_property(
            "baseline", [](const RunConfig& c) { return driver::to_string(c.baseline); },
            [](RunConfig& c, const std::string& s) {
                if (s == "none")
                    c.baseline = driver::Baseline::None;
                else if (s == "random")
                    c.baseline = driver::Baseline::Random;
                else if (s == "static")
                    c.baseline = driver::Baseline::Static;
                else
                    throw LookupError("unknown baseline '" + s + "'");
            })
        .def("resolved_budget", &RunConfig::resolved_budget)
        .def("resolved_iterations", &RunConfig::resolved_iterations)
        .def("validate", &RunConfig::validate);

    using driver::IterationRecord;
    py::class_<IterationRecord>(m, "IterationRecord")
        .def_readonly("iteration", &IterationRecord::iteration)
        .def_readonly("selected_af", &IterationRecord::selected_af)
        .def_readonly("evaluations", &IterationRecord::evaluations)
        .def_readonly("hypervolume", &IterationRecord::hypervolume)
        .def_readonly("dpf_all", &IterationRecord::dpf_all)
        .def_readonly("dpf_front", &IterationRecord::dpf_front)
        .def_readonly("immediate_rewards", &IterationRecord::immediate_rewards)
        .def_readonly("cumulative_rewards", &IterationRecord::cumulative_rewards)
        .def_readonly("normalized_rewards", &IterationRecord::normalized_rewards)
        .def_readonly("probabilities", &IterationRecord::probabilities)
        .def_readonly("lambda_", &IterationRecord::lambda)
        .def_readonly("batch_inputs", &IterationRecord::batch_inputs)
        .def_readonly("batch_outputs", &IterationRecord::batch_outputs)
        .def_readonly("wall_time", &IterationRecord::wall_time);

    using driver::ExperimentTrace;
    py::class_<ExperimentTrace>(m, "ExperimentTrace")
        .def_readonly("config", &ExperimentTrace::config)
        .def_readonly("arm_names", &ExperimentTrace::arm_names)
        .def_readonly("reference_point", &ExperimentTrace::reference_point)
        .def_readonly("initial_inputs", &ExperimentTrace::initial_inputs)
        .def_readonly("initial_outputs", &ExperimentTrace::initial_outputs)
        .def_readonly("records", &ExperimentTrace::records)
        .def_readonly("pareto_set", &ExperimentTrace::pareto_set)
        .def_readonly("pareto_front", &ExperimentTrace::pareto_front)
        .def("total_evaluations", &ExperimentTrace::total_evaluations);

    m.def("run", &driver::run, py::arg("config"), py::call_guard<py::gil_scoped_release>());
    m.def("write_trace", &driver::write_trace, py::arg("trace"), py::arg("path"));
    m.def("read_trace", &driver::read_trace, py::arg("path"));
    m.def("read_front_file", &driver::read_front_file, py::arg("path"));
}

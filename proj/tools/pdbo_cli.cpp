// Command-line front end: single runs, seed sweeps, metric recomputation and
// acquisition-selection statistics.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pdbo/benchmarks.hpp"
#include "pdbo/driver.hpp"

namespace fs = std::filesystem;
using namespace pdbo;

namespace {

struct RunFlags {
    std::string problem = "zdt1";
    std::size_t dim = 0;
    std::size_t batch_size = 4;
    int iters = 0;
    std::size_t budget = 0;
    std::size_t initial_points = 5;
    std::uint64_t seed = 0;
    double gamma = 0.7;
    double eta = 4.0;
    std::string portfolio = "ei,ts,ucb,id";
    std::string reward_mode = "relative-hv";
    std::string dpf_mode = "all";
    std::string baseline = "none";
    std::string selection = "dpp";
    int population = 100;
    int generations = 200;
    int ts_features = 500;
};

void add_run_flags(CLI::App* app, RunFlags& f, bool with_seed)
{
    app->add_option("--problem", f.problem, "Benchmark problem")->capture_default_str();
    app->add_option("--dim", f.dim, "Override the input dimension (0 keeps the default)");
    app->add_option("--batch-size", f.batch_size, "Batch size B")->capture_default_str();
    app->add_option("--iters", f.iters, "Number of BO iterations");
    app->add_option("--budget", f.budget, "Total evaluation budget, initial design included");
    app->add_option("--initial", f.initial_points, "Initial random design size")->capture_default_str();
    if (with_seed)
        app->add_option("--seed", f.seed, "Master seed")->capture_default_str();
    app->add_option("--gamma", f.gamma, "Reward discount")->capture_default_str();
    app->add_option("--eta", f.eta, "Hedge temperature")->capture_default_str();
    app->add_option("--portfolio", f.portfolio, "Comma-separated acquisition list")->capture_default_str();
    app->add_option("--reward-mode", f.reward_mode, "relative-hv | spm")->capture_default_str();
    app->add_option("--dpf-mode", f.dpf_mode, "all | front (summary only)")->capture_default_str();
    app->add_option("--baseline", f.baseline, "none | random | static:<af>")->capture_default_str();
    app->add_option("--selection", f.selection, "dpp | greedy-hvc | uncertainty")->capture_default_str();
    app->add_option("--population", f.population, "NSGA-II population size")->capture_default_str();
    app->add_option("--generations", f.generations, "NSGA-II generations")->capture_default_str();
    app->add_option("--ts-features", f.ts_features, "Random features per Thompson sample")->capture_default_str();
}

driver::RunConfig to_config(const RunFlags& f)
{
    driver::RunConfig c;
    c.problem = f.problem;
    if (f.dim > 0)
        c.dim = f.dim;
    c.batch_size = f.batch_size;
    if (f.iters > 0)
        c.iterations = f.iters;
    if (f.budget > 0)
        c.budget = f.budget;
    if (!c.iterations && !c.budget)
        c.iterations = 20;
    c.initial_points = f.initial_points;
    c.seed = f.seed;
    c.gamma = f.gamma;
    c.eta = f.eta;
    c.portfolio = parse_portfolio(f.portfolio);
    c.reward_mode = bandit::parse_reward_mode(f.reward_mode);
    c.dpf_mode = metrics::parse_dpf_mode(f.dpf_mode);
    c.selection = driver::parse_selection(f.selection);
    c.population_size = f.population;
    c.generations = f.generations;
    c.ts_features = f.ts_features;
    if (f.baseline == "none") {
        c.baseline = driver::Baseline::None;
    } else if (f.baseline == "random") {
        c.baseline = driver::Baseline::Random;
    } else if (f.baseline.rfind("static:", 0) == 0) {
        c.baseline = driver::Baseline::Static;
        c.static_af = parse_acquisition(f.baseline.substr(7));
    } else {
        throw ParameterError("unknown baseline '" + f.baseline + "'");
    }
    c.validate();
    return c;
}

double final_dpf(const driver::ExperimentTrace& t)
{
    if (t.records.empty())
        return metrics::dpf(t.all_outputs(), t.config.dpf_mode);
    const auto& r = t.records.back();
    return t.config.dpf_mode == metrics::DpfMode::AllEvaluated ? r.dpf_all : r.dpf_front;
}

double final_hv(const driver::ExperimentTrace& t)
{
    return t.records.empty() ? 0.0 : t.records.back().hypervolume;
}

std::vector<std::size_t> parse_size_list(const std::string& s)
{
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty())
            out.push_back(static_cast<std::size_t>(std::stoul(tok)));
    return out;
}

int cmd_run(const RunFlags& f, const std::string& out)
{
    auto cfg = to_config(f);
    cfg.output_path = out;
    const auto trace = driver::run(cfg);
    if (!out.empty())
        driver::write_trace(trace, out);
    std::printf("problem=%s seed=%llu evaluations=%zu hv=%.10g dpf_%s=%.10g front=%zu\n",
                cfg.problem.c_str(), static_cast<unsigned long long>(cfg.seed), trace.total_evaluations(),
                final_hv(trace), metrics::to_string(cfg.dpf_mode).c_str(), final_dpf(trace),
                trace.pareto_front.size());
    return 0;
}

int cmd_sweep(const RunFlags& f, const std::string& seeds_spec, const std::string& batches_spec,
              const std::string& out_dir)
{
    const auto seeds = parse_size_list(seeds_spec);
    const auto batches = parse_size_list(batches_spec);
    if (seeds.empty() || batches.empty())
        throw ParameterError("sweep needs at least one seed and one batch size");
    if (!out_dir.empty() && !fs::is_directory(out_dir))
        throw IoError("directory '" + out_dir + "' does not exist");

    std::printf("batch_size,seed,evaluations,hypervolume,dpf\n");
    for (std::size_t b : batches) {
        for (std::size_t s : seeds) {
            RunFlags g = f;
            g.batch_size = b;
            g.seed = s;
            auto cfg = to_config(g);
            if (!out_dir.empty())
                cfg.output_path = (fs::path(out_dir) / (cfg.problem + "_b" + std::to_string(b) + "_s"
                                                        + std::to_string(s) + ".csv"))
                                      .string();
            const auto trace = driver::run(cfg);
            if (!cfg.output_path.empty())
                driver::write_trace(trace, cfg.output_path);
            std::printf("%zu,%zu,%zu,%.17g,%.17g\n", b, s, trace.total_evaluations(), final_hv(trace),
                        final_dpf(trace));
            std::fflush(stdout);
        }
    }
    return 0;
}

int cmd_metrics(const std::vector<std::string>& traces, const std::string& ref_front_path)
{
    std::vector<ObjectiveVector> ref_front;
    if (!ref_front_path.empty())
        ref_front = driver::read_front_file(ref_front_path);
    std::printf("trace,evaluations,hypervolume,dpf_all,dpf_front%s\n", ref_front.empty() ? "" : ",igd");
    for (const auto& path : traces) {
        const auto t = driver::read_trace(path);
        const auto outputs = t.all_outputs();
        std::vector<ObjectiveVector> front;
        for (std::size_t i : nondominated_front(outputs))
            front.push_back(outputs[i]);
        ReferencePoint r{Eigen::Map<const Eigen::VectorXd>(t.reference_point.data(),
                                                           static_cast<Eigen::Index>(t.reference_point.size()))};
        std::printf("%s,%zu,%.17g,%.17g,%.17g", path.c_str(), outputs.size(), metrics::hypervolume(front, r),
                    metrics::dpf(outputs, metrics::DpfMode::AllEvaluated),
                    metrics::dpf(outputs, metrics::DpfMode::FrontOnly));
        if (!ref_front.empty())
            std::printf(",%.17g", metrics::igd(front, ref_front));
        std::printf("\n");
    }
    return 0;
}

int cmd_afstats(const std::vector<std::string>& traces)
{
    std::map<std::string, std::size_t> counts;
    std::vector<std::string> order;
    std::size_t total = 0;
    for (const auto& path : traces) {
        const auto t = driver::read_trace(path);
        for (const auto& a : t.arm_names)
            if (!counts.count(a)) {
                counts[a] = 0;
                order.push_back(a);
            }
        for (const auto& r : t.records) {
            if (!counts.count(r.selected_af)) {
                counts[r.selected_af] = 0;
                order.push_back(r.selected_af);
            }
            ++counts[r.selected_af];
            ++total;
        }
    }
    std::printf("%-8s %10s %10s\n", "af", "selected", "percent");
    for (const auto& a : order)
        std::printf("%-8s %10zu %9.2f%%\n", a.c_str(), counts[a],
                    total ? 100.0 * static_cast<double>(counts[a]) / static_cast<double>(total) : 0.0);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Batch multi-objective Bayesian optimization with adaptive acquisition selection"};
    app.require_subcommand(1);

    RunFlags run_flags;
    std::string run_out;
    auto* run = app.add_subcommand("run", "Single optimization run");
    add_run_flags(run, run_flags, true);
    run->add_option("--out", run_out, "CSV trace path (a JSON sidecar is written next to it)");

    RunFlags sweep_flags;
    std::string sweep_seeds = "0,1,2,3,4";
    std::string sweep_batches = "4";
    std::string sweep_out;
    auto* sweep = app.add_subcommand("sweep", "Runs over seeds x batch sizes");
    add_run_flags(sweep, sweep_flags, false);
    sweep->add_option("--seeds", sweep_seeds, "Comma-separated seeds")->capture_default_str();
    sweep->add_option("--batch-sizes", sweep_batches, "Comma-separated batch sizes")->capture_default_str();
    sweep->add_option("--out", sweep_out, "Existing directory for the traces");

    std::vector<std::string> metric_traces;
    std::string ref_front;
    auto* met = app.add_subcommand("metrics", "Recompute HV, DPF and IGD from stored traces");
    met->add_option("traces", metric_traces, "CSV trace files")->required();
    met->add_option("--ref-front", ref_front, "Reference front file (one objective row per line)");

    std::vector<std::string> af_traces;
    auto* afs = app.add_subcommand("afstats", "Acquisition selection percentages");
    afs->add_option("traces", af_traces, "CSV trace files")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(run_flags, run_out);
        if (sweep->parsed())
            return cmd_sweep(sweep_flags, sweep_seeds, sweep_batches, sweep_out);
        if (met->parsed())
            return cmd_metrics(metric_traces, ref_front);
        if (afs->parsed())
            return cmd_afstats(af_traces);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pdbo/driver.hpp"

namespace pdbo::driver {

namespace {

using nlohmann::json;

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    if (s.empty())
        return out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos)
            break;
        start = pos + 1;
    }
    return out;
}

double parse_double(const std::string& s)
{
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw IoError("malformed number '" + s + "' in trace");
    return v;
}

std::string join_vec(const std::vector<double>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ';';
        out += fmt(v[i]);
    }
    return out;
}

std::vector<double> parse_vec(const std::string& s)
{
    std::vector<double> out;
    for (const auto& tok : split(s, ';'))
        out.push_back(parse_double(tok));
    return out;
}

std::string join_points(const std::vector<std::vector<double>>& pts)
{
    std::string out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i)
            out += '|';
        out += join_vec(pts[i]);
    }
    return out;
}

std::vector<std::vector<double>> parse_points(const std::string& s)
{
    std::vector<std::vector<double>> out;
    for (const auto& tok : split(s, '|'))
        out.push_back(parse_vec(tok));
    return out;
}

template <class T>
json optional_json(const std::optional<T>& v)
{
    return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> optional_from(const json& j)
{
    if (j.is_null())
        return std::nullopt;
    return j.get<T>();
}

json config_json(const RunConfig& c)
{
    std::vector<std::string> portfolio;
    for (auto k : c.portfolio)
        portfolio.push_back(to_string(k));
    return {
        {"problem", c.problem},
        {"dim", optional_json(c.dim)},
        {"batch_size", c.batch_size},
        {"iterations", optional_json(c.iterations)},
        {"budget", optional_json(c.budget)},
        {"initial_points", c.initial_points},
        {"seed", c.seed},
        {"portfolio", portfolio},
        {"gamma", c.gamma},
        {"eta", c.eta},
        {"reward_mode", bandit::to_string(c.reward_mode)},
        {"dpf_mode", metrics::to_string(c.dpf_mode)},
        {"baseline", to_string(c.baseline)},
        {"static_af", to_string(c.static_af)},
        {"selection", to_string(c.selection)},
        {"population_size", c.population_size},
        {"generations", c.generations},
        {"ts_features", c.ts_features},
        {"gp_starts", c.gp_starts},
        {"output_path", c.output_path},
    };
}

Baseline parse_baseline(const std::string& s)
{
    if (s == "none")
        return Baseline::None;
    if (s == "random")
        return Baseline::Random;
    if (s == "static")
        return Baseline::Static;
    throw IoError("unknown baseline '" + s + "' in trace");
}

RunConfig config_from(const json& j)
{
    RunConfig c;
    c.problem = j.at("problem").get<std::string>();
    c.dim = optional_from<std::size_t>(j.at("dim"));
    c.batch_size = j.at("batch_size").get<std::size_t>();
    c.iterations = optional_from<int>(j.at("iterations"));
    c.budget = optional_from<std::size_t>(j.at("budget"));
    c.initial_points = j.at("initial_points").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.portfolio.clear();
    for (const auto& name : j.at("portfolio"))
        c.portfolio.push_back(parse_acquisition(name.get<std::string>()));
    c.gamma = j.at("gamma").get<double>();
    c.eta = j.at("eta").get<double>();
    c.reward_mode = bandit::parse_reward_mode(j.at("reward_mode").get<std::string>());
    c.dpf_mode = metrics::parse_dpf_mode(j.at("dpf_mode").get<std::string>());
    c.baseline = parse_baseline(j.at("baseline").get<std::string>());
    c.static_af = parse_acquisition(j.at("static_af").get<std::string>());
    c.selection = parse_selection(j.at("selection").get<std::string>());
    c.population_size = j.at("population_size").get<int>();
    c.generations = j.at("generations").get<int>();
    c.ts_features = j.at("ts_features").get<int>();
    c.gp_starts = j.at("gp_starts").get<int>();
    c.output_path = j.at("output_path").get<std::string>();
    return c;
}

std::vector<std::string> csv_header(const std::vector<std::string>& arms)
{
    std::vector<std::string> h{"iteration", "selected_af", "evaluations", "hypervolume", "dpf_all", "dpf_front"};
    for (const char* prefix : {"ir_", "g_", "r_", "p_"})
        for (const auto& a : arms)
            h.push_back(prefix + a);
    for (const char* tail : {"lambda", "batch_x", "batch_y"})
        h.emplace_back(tail);
    return h;
}

} // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path)
{
    auto p = csv_path;
    p.replace_extension(".json");
    if (p == csv_path)
        p += ".json";
    return p;
}

void write_trace(const ExperimentTrace& trace, const std::filesystem::path& path)
{
    if (path.has_parent_path() && !std::filesystem::is_directory(path.parent_path()))
        throw IoError("directory '" + path.parent_path().string() + "' does not exist");
    std::ofstream csv(path, std::ios::binary);
    if (!csv)
        throw IoError("cannot open '" + path.string() + "' for writing");

    const auto header = csv_header(trace.arm_names);
    for (std::size_t i = 0; i < header.size(); ++i)
        csv << (i ? "," : "") << header[i];
    csv << '\n';

    const std::size_t m = trace.arm_names.size();
    for (const auto& r : trace.records) {
        csv << r.iteration << ',' << r.selected_af << ',' << r.evaluations << ',' << fmt(r.hypervolume) << ','
            << fmt(r.dpf_all) << ',' << fmt(r.dpf_front);
        for (const auto* v : {&r.immediate_rewards, &r.cumulative_rewards, &r.normalized_rewards, &r.probabilities}) {
            if (v->size() != m)
                throw DimensionError("write_trace: per-arm column length mismatch");
            for (double x : *v)
                csv << ',' << fmt(x);
        }
        csv << ',' << join_vec(r.lambda) << ',' << join_points(r.batch_inputs) << ','
            << join_points(r.batch_outputs) << '\n';
    }
    if (!csv)
        throw IoError("failed writing '" + path.string() + "'");

    std::vector<double> wall;
    for (const auto& r : trace.records)
        wall.push_back(r.wall_time);
    const json side{
        {"config", config_json(trace.config)},
        {"arm_names", trace.arm_names},
        {"reference_point", trace.reference_point},
        {"initial_inputs", trace.initial_inputs},
        {"initial_outputs", trace.initial_outputs},
        {"wall_time", wall},
        {"pareto_set", trace.pareto_set},
        {"pareto_front", trace.pareto_front},
    };
    std::ofstream js(sidecar_path(path));
    if (!js)
        throw IoError("cannot open sidecar for '" + path.string() + "'");
    js << side.dump(2) << '\n';
}

ExperimentTrace read_trace(const std::filesystem::path& path)
{
    std::ifstream js(sidecar_path(path));
    if (!js)
        throw IoError("missing sidecar for '" + path.string() + "'");
    json side;
    try {
        js >> side;
    } catch (const json::exception& e) {
        throw IoError(std::string("bad sidecar JSON: ") + e.what());
    }

    ExperimentTrace t;
    try {
        t.config = config_from(side.at("config"));
        t.arm_names = side.at("arm_names").get<std::vector<std::string>>();
        t.reference_point = side.at("reference_point").get<std::vector<double>>();
        t.initial_inputs = side.at("initial_inputs").get<std::vector<std::vector<double>>>();
        t.initial_outputs = side.at("initial_outputs").get<std::vector<std::vector<double>>>();
        t.pareto_set = side.at("pareto_set").get<std::vector<std::vector<double>>>();
        t.pareto_front = side.at("pareto_front").get<std::vector<std::vector<double>>>();
    } catch (const json::exception& e) {
        throw IoError(std::string("bad sidecar contents: ") + e.what());
    }
    const auto wall = side.value("wall_time", std::vector<double>{});

    std::ifstream csv(path);
    if (!csv)
        throw IoError("cannot open '" + path.string() + "'");
    std::string line;
    std::getline(csv, line);
    const auto header = csv_header(t.arm_names);
    if (split(line, ',') != header)
        throw IoError("unexpected CSV header in '" + path.string() + "'");

    const std::size_t m = t.arm_names.size();
    while (std::getline(csv, line)) {
        if (line.empty())
            continue;
        const auto f = split(line, ',');
        if (f.size() != header.size())
            throw IoError("wrong field count in '" + path.string() + "'");
        IterationRecord r;
        std::size_t c = 0;
        r.iteration = static_cast<int>(parse_double(f[c++]));
        r.selected_af = f[c++];
        r.evaluations = static_cast<std::size_t>(parse_double(f[c++]));
        r.hypervolume = parse_double(f[c++]);
        r.dpf_all = parse_double(f[c++]);
        r.dpf_front = parse_double(f[c++]);
        for (auto* v : {&r.immediate_rewards, &r.cumulative_rewards, &r.normalized_rewards, &r.probabilities})
            for (std::size_t a = 0; a < m; ++a)
                v->push_back(parse_double(f[c++]));
        r.lambda = parse_vec(f[c++]);
        r.batch_inputs = parse_points(f[c++]);
        r.batch_outputs = parse_points(f[c++]);
        if (t.records.size() < wall.size())
            r.wall_time = wall[t.records.size()];
        t.records.push_back(std::move(r));
    }
    return t;
}

std::vector<ObjectiveVector> read_front_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");
    std::vector<ObjectiveVector> out;
    std::string line;
    while (std::getline(in, line)) {
        for (char& ch : line)
            if (ch == ',')
                ch = ' ';
        std::istringstream ss(line);
        std::vector<double> row;
        std::string tok;
        while (ss >> tok) {
            if (tok[0] == '#')
                break;
            row.push_back(parse_double(tok));
        }
        if (row.empty())
            continue;
        if (!out.empty() && static_cast<std::size_t>(out.front().size()) != row.size())
            throw IoError("ragged rows in '" + path.string() + "'");
        out.push_back(Eigen::Map<Eigen::VectorXd>(row.data(), static_cast<Eigen::Index>(row.size())));
    }
    return out;
}

} // namespace pdbo::driver

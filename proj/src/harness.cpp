// SPDX-License-Identifier: Apache-2.0
#include "pinch/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <sstream>
#include <stdexcept>

#include "pinch/seo.hpp"
#include "pinch/ula.hpp"

namespace pinch
{

SweepVariable parse_sweep_variable(std::string_view name)
{
    if (name == "power_dbm")
        return SweepVariable::power_dbm;
    if (name == "region_dx")
        return SweepVariable::region_dx;
    if (name == "num_antennas")
        return SweepVariable::num_antennas;
    if (name == "num_groups")
        return SweepVariable::num_groups;
    throw std::invalid_argument("unknown sweep variable '" + std::string(name) + "'");
}

std::string_view to_string(SweepVariable v)
{
    switch (v)
    {
    case SweepVariable::power_dbm:
        return "power_dbm";
    case SweepVariable::region_dx:
        return "region_dx";
    case SweepVariable::num_antennas:
        return "num_antennas";
    case SweepVariable::num_groups:
        return "num_groups";
    }
    return "unknown";
}

TopologyMode parse_topology_mode(std::string_view name)
{
    if (name == "uniform_random")
        return TopologyMode::uniform_random;
    if (name == "heterogeneous_clusters")
        return TopologyMode::heterogeneous_clusters;
    throw std::invalid_argument("unknown topology mode '" + std::string(name) + "'");
}

std::string_view to_string(TopologyMode mode)
{
    return mode == TopologyMode::uniform_random ? "uniform_random" : "heterogeneous_clusters";
}

namespace
{

int as_count(double value, const char *what)
{
    const double r = std::round(value);
    if (r != value || r < 1.0)
        throw std::invalid_argument(std::string("sweep value for ") + what + " must be a positive integer");
    return static_cast<int>(r);
}

} // namespace

void ExperimentSpec::validate() const
{
    if (trials < 1)
        throw std::invalid_argument("spec: trials must be >= 1");
    if (values.empty())
        throw std::invalid_argument("spec: values must be nonempty");
    if (schemes.empty())
        throw std::invalid_argument("spec: schemes must be nonempty");
    if (!pass && !baseline)
        throw std::invalid_argument("spec: enable pass, baseline or both");
    if (num_groups < 1)
        throw std::invalid_argument("spec: num_groups must be >= 1");
    if (users_per_group && *users_per_group < 1)
        throw std::invalid_argument("spec: users_per_group must be >= 1");
    for (double v : values)
    {
        config_at(v).validate();
        const auto sizes = group_sizes_at(v);
        for (std::size_t s : sizes)
            if (s == 0)
                throw std::invalid_argument("spec: fewer users than groups");
    }
}

SystemConfig ExperimentSpec::config_at(double value) const
{
    SystemConfig c = config;
    switch (sweep)
    {
    case SweepVariable::power_dbm:
        c.power_budget_w = dbm_to_watt(value);
        break;
    case SweepVariable::region_dx:
        c.waveguide_length_m = value;
        break;
    case SweepVariable::num_antennas:
        c.num_antennas = as_count(value, "num_antennas");
        break;
    case SweepVariable::num_groups:
        as_count(value, "num_groups");
        break;
    }
    return c;
}

std::vector<std::size_t> ExperimentSpec::group_sizes_at(double value) const
{
    const int groups = sweep == SweepVariable::num_groups ? as_count(value, "num_groups") : num_groups;
    const auto g = static_cast<std::size_t>(groups);
    if (users_per_group)
        return std::vector<std::size_t>(g, static_cast<std::size_t>(*users_per_group));
    const auto total = static_cast<std::size_t>(std::max(num_users, 0));
    std::vector<std::size_t> sizes(g, total / g);
    for (std::size_t i = 0; i < total % g; ++i)
        ++sizes[i];
    return sizes;
}

ExperimentSpec spec_from_json(const json &j)
{
    if (!j.is_object())
        throw std::invalid_argument("spec: expected a JSON object");
    ExperimentSpec s;
    for (const auto &[key, value] : j.items())
    {
        if (key == "sweep")
            s.sweep = parse_sweep_variable(value.get<std::string>());
        else if (key == "values")
            s.values = value.get<std::vector<double>>();
        else if (key == "schemes")
        {
            s.schemes.clear();
            for (const auto &name : value)
                s.schemes.push_back(parse_scheme(name.get<std::string>()));
        }
        else if (key == "pass")
            s.pass = value.get<bool>();
        else if (key == "baseline")
            s.baseline = value.get<bool>();
        else if (key == "topology_mode")
            s.topology_mode = parse_topology_mode(value.get<std::string>());
        else if (key == "trials")
            s.trials = value.get<int>();
        else if (key == "seed")
            s.seed = value.get<std::uint64_t>();
        else if (key == "num_groups")
            s.num_groups = value.get<int>();
        else if (key == "num_users")
            s.num_users = value.get<int>();
        else if (key == "users_per_group")
            s.users_per_group = value.is_null() ? std::nullopt : std::optional<int>(value.get<int>());
        else if (key == "config")
            s.config = config_from_json(value);
        else
            throw std::invalid_argument("spec: unknown key '" + key + "'");
    }
    s.validate();
    return s;
}

json spec_to_json(const ExperimentSpec &s)
{
    json j;
    j["sweep"] = std::string(to_string(s.sweep));
    j["values"] = s.values;
    json schemes = json::array();
    for (Scheme sc : s.schemes)
        schemes.push_back(std::string(to_string(sc)));
    j["schemes"] = schemes;
    j["pass"] = s.pass;
    j["baseline"] = s.baseline;
    j["topology_mode"] = std::string(to_string(s.topology_mode));
    j["trials"] = s.trials;
    j["seed"] = s.seed;
    j["num_groups"] = s.num_groups;
    j["num_users"] = s.num_users;
    j["users_per_group"] = s.users_per_group ? json(*s.users_per_group) : json(nullptr);
    j["config"] = config_to_json(s.config);
    return j;
}

ExperimentSpec load_spec(const std::filesystem::path &path)
{
    try
    {
        return spec_from_json(json::parse(read_text_file(path)));
    }
    catch (const json::exception &e)
    {
        throw std::invalid_argument("'" + path.string() + "': " + e.what());
    }
}

ExperimentSpec preset_spec(std::string_view name)
{
    ExperimentSpec s;
    s.baseline = true;
    s.num_groups = 4;
    s.num_users = 12;
    s.config.num_antennas = 10;
    s.config.waveguide_length_m = 20.0;
    if (name == "fig3" || name == "fig4")
    {
        s.sweep = SweepVariable::power_dbm;
        s.values = {-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0};
        if (name == "fig4")
            s.topology_mode = TopologyMode::heterogeneous_clusters;
    }
    else if (name == "fig5")
    {
        s.sweep = SweepVariable::region_dx;
        s.values = {10.0, 20.0, 30.0, 40.0, 50.0};
        s.num_groups = 3;
        s.config.power_budget_w = dbm_to_watt(-10.0);
    }
    else if (name == "fig6")
    {
        s.sweep = SweepVariable::num_antennas;
        s.values = {2.0, 4.0, 6.0, 8.0, 10.0, 12.0};
        s.num_groups = 3;
    }
    else if (name == "fig7")
    {
        s.sweep = SweepVariable::num_groups;
        s.values = {2.0, 3.0, 4.0, 5.0, 6.0};
        s.users_per_group = 4;
    }
    else
    {
        throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
    }
    return s;
}

std::vector<std::string> preset_names()
{
    return {"fig3", "fig4", "fig5", "fig6", "fig7"};
}

Topology generate_topology(TopologyMode mode, const SystemConfig &config, std::span<const std::size_t> group_sizes,
                           Rng &rng)
{
    Topology t;
    const double dx = config.waveguide_length_m;
    const double dy = config.region_depth_m;
    const double slice = dx / static_cast<double>(group_sizes.size());
    for (std::size_t g = 0; g < group_sizes.size(); ++g)
    {
        const double lo = mode == TopologyMode::uniform_random ? 0.0 : slice * static_cast<double>(g);
        const double hi = mode == TopologyMode::uniform_random ? dx : lo + slice;
        t.groups.emplace_back();
        for (std::size_t k = 0; k < group_sizes[g]; ++k)
        {
            const double x = uniform(rng, lo, hi);
            const double y = uniform(rng, 0.0, dy);
            t.groups.back().push_back(t.users.size());
            t.users.push_back(Point3{x, y, 0.0});
            t.noise_w.push_back(config.noise_w);
        }
    }
    t.validate();
    return t;
}

const SummaryRow &ExperimentResult::row(double sweep_value, Scheme scheme, bool baseline) const
{
    for (const auto &r : summary)
        if (r.sweep_value == sweep_value && r.scheme == scheme && r.baseline == baseline)
            return r;
    throw std::out_of_range("ExperimentResult: no summary row for " + std::string(to_string(scheme)));
}

namespace
{

struct Variant
{
    Scheme scheme;
    bool baseline;
};

std::vector<Variant> variants(const ExperimentSpec &spec)
{
    std::vector<Variant> out;
    for (Scheme s : spec.schemes)
    {
        if (spec.pass)
            out.push_back({s, false});
        if (spec.baseline)
            out.push_back({s, true});
    }
    return out;
}

std::vector<TrialRecord> run_trial(const ExperimentSpec &spec, double value, int trial,
                                   const std::vector<Variant> &vars, Execution inner)
{
    std::vector<TrialRecord> out;
    for (const Variant &v : vars)
    {
        TrialRecord r;
        r.sweep_value = value;
        r.scheme = v.scheme;
        r.baseline = v.baseline;
        r.trial = trial;
        out.push_back(r);
    }

    try
    {
        SystemConfig config = spec.config_at(value);
        config.execution = inner;
        const auto sizes = spec.group_sizes_at(value);
        // Common random numbers: the trial index alone picks the stream.
        Rng rng = child_stream(spec.seed, static_cast<std::uint64_t>(trial));
        const Topology topology = generate_topology(spec.topology_mode, config, sizes, rng);
        const Placement initial = random_placement(CandidateGrid::from_config(config),
                                                   static_cast<std::size_t>(config.num_antennas), config, rng);
        for (std::size_t i = 0; i < vars.size(); ++i)
        {
            try
            {
                const SchemeSolution s = vars[i].baseline ? solve_ula(topology, vars[i].scheme, config)
                                                          : solve_scheme(vars[i].scheme, topology, config, initial);
                if (!std::isfinite(s.mmf_rate))
                    throw std::runtime_error("non-finite rate");
                out[i].ok = true;
                out[i].mmf_rate = s.mmf_rate;
                out[i].iterations = s.iterations;
            }
            catch (const std::exception &e)
            {
                out[i].error = e.what();
            }
        }
    }
    catch (const std::exception &e)
    {
        for (auto &r : out)
            r.error = e.what();
    }
    return out;
}

} // namespace

ExperimentResult run_experiment(const ExperimentSpec &spec)
{
    spec.validate();
    const std::vector<Variant> vars = variants(spec);
    const std::size_t num_values = spec.values.size();
    const auto trials = static_cast<std::size_t>(spec.trials);
    const std::size_t jobs = num_values * trials;

    // per_job[v * trials + t] holds one record per variant.
    std::vector<std::vector<TrialRecord>> per_job(jobs);
    const bool parallel = spec.config.execution == Execution::parallel;
    const auto count = static_cast<std::ptrdiff_t>(jobs);
    if (parallel)
    {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t j = 0; j < count; ++j)
        {
            const auto v = static_cast<std::size_t>(j) / trials;
            const auto t = static_cast<int>(static_cast<std::size_t>(j) % trials);
            per_job[static_cast<std::size_t>(j)] = run_trial(spec, spec.values[v], t, vars, Execution::serial);
        }
    }
    else
    {
        for (std::ptrdiff_t j = 0; j < count; ++j)
        {
            const auto v = static_cast<std::size_t>(j) / trials;
            const auto t = static_cast<int>(static_cast<std::size_t>(j) % trials);
            per_job[static_cast<std::size_t>(j)] = run_trial(spec, spec.values[v], t, vars, Execution::serial);
        }
    }

    ExperimentResult result;
    result.spec = spec;
    for (std::size_t v = 0; v < num_values; ++v)
    {
        for (std::size_t k = 0; k < vars.size(); ++k)
        {
            SummaryRow row;
            row.sweep_value = spec.values[v];
            row.scheme = vars[k].scheme;
            row.baseline = vars[k].baseline;
            double sum = 0.0;
            std::vector<double> ok_rates;
            for (std::size_t t = 0; t < trials; ++t)
            {
                const TrialRecord &r = per_job[v * trials + t][k];
                result.trials.push_back(r);
                if (r.ok)
                {
                    ok_rates.push_back(r.mmf_rate);
                    sum += r.mmf_rate;
                }
            }
            row.trials_ok = static_cast<int>(ok_rates.size());
            row.trials_failed = spec.trials - row.trials_ok;
            if (!ok_rates.empty())
            {
                const double n = static_cast<double>(ok_rates.size());
                row.mean_rate = sum / n;
                if (ok_rates.size() > 1)
                {
                    double ss = 0.0;
                    for (double r : ok_rates)
                        ss += (r - row.mean_rate) * (r - row.mean_rate);
                    row.stderr_rate = std::sqrt(ss / (n - 1.0) / n);
                }
            }
            else
            {
                row.mean_rate = std::numeric_limits<double>::quiet_NaN();
            }
            result.summary.push_back(row);
        }
    }
    return result;
}

namespace
{

std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string &s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
    {
        if (c == '"')
            out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

} // namespace

std::string summary_csv(const ExperimentResult &result)
{
    std::ostringstream out;
    out << "sweep_value,scheme,baseline,mean_rate,stderr,trials_ok,trials_failed\n";
    for (const auto &r : result.summary)
        out << num(r.sweep_value) << ',' << to_string(r.scheme) << ',' << (r.baseline ? 1 : 0) << ','
            << num(r.mean_rate) << ',' << num(r.stderr_rate) << ',' << r.trials_ok << ',' << r.trials_failed << '\n';
    return out.str();
}

std::string trials_csv(const ExperimentResult &result)
{
    std::ostringstream out;
    out << "sweep_value,scheme,baseline,trial,ok,mmf_rate,iterations,error\n";
    for (const auto &r : result.trials)
        out << num(r.sweep_value) << ',' << to_string(r.scheme) << ',' << (r.baseline ? 1 : 0) << ',' << r.trial
            << ',' << (r.ok ? 1 : 0) << ',' << (r.ok ? num(r.mmf_rate) : "") << ',' << r.iterations << ','
            << csv_field(r.error) << '\n';
    return out.str();
}

std::string trace_csv(const SchemeSolution &solution)
{
    std::ostringstream out;
    out << "scheme,baseline,slot,sweep,objective,progress,stage2_evaluations,total_candidates\n";
    for (std::size_t slot = 0; slot < solution.traces.size(); ++slot)
    {
        const TraceSummary &t = solution.traces[slot];
        for (std::size_t i = 0; i < t.objective.size(); ++i)
            out << to_string(solution.scheme) << ',' << (solution.baseline ? 1 : 0) << ',' << slot << ',' << i << ','
                << num(t.objective[i]) << ',' << num(t.progress[i]) << ',' << t.stage2_evaluations << ','
                << t.total_candidates << '\n';
    }
    return out.str();
}

json experiment_metadata(const ExperimentResult &result)
{
    json j;
    j["spec"] = spec_to_json(result.spec);
    if (result.spec.topology_mode == TopologyMode::heterogeneous_clusters)
        j["cluster_geometry"] = "equal x-partitions of the waveguide length, full region depth";
    int failed = 0;
    for (const auto &r : result.summary)
        failed += r.trials_failed;
    j["trials_failed"] = failed;
    return j;
}

void emit(const ExperimentResult &result, const std::filesystem::path &out_dir)
{
    if (result.summary.empty())
        throw std::invalid_argument("emit: no results to write");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw std::runtime_error("cannot create '" + out_dir.string() + "': " + ec.message());
    write_text_file(out_dir / "summary.csv", summary_csv(result));
    write_text_file(out_dir / "trials.csv", trials_csv(result));
    write_text_file(out_dir / "metadata.json", experiment_metadata(result).dump(2) + "\n");
}

TrendCheck check_trend(const ExperimentResult &result, Scheme scheme, bool baseline, Trend trend, double slack)
{
    TrendCheck check;
    std::ostringstream detail;
    detail << to_string(scheme) << (baseline ? " (baseline)" : "") << ":";
    double previous = std::numeric_limits<double>::quiet_NaN();
    for (double v : result.spec.values)
    {
        const double mean = result.row(v, scheme, baseline).mean_rate;
        detail << ' ' << num(mean);
        if (!std::isfinite(mean))
            check.ok = false;
        if (std::isfinite(previous))
        {
            const bool good = trend == Trend::strictly_decreasing ? mean < previous + slack : mean >= previous - slack;
            check.ok = check.ok && good;
        }
        previous = mean;
    }
    check.detail = detail.str();
    return check;
}

TrendCheck check_dominance(const ExperimentResult &result, Scheme first, bool first_baseline, Scheme second,
                           bool second_baseline, double slack)
{
    TrendCheck check;
    std::ostringstream detail;
    for (double v : result.spec.values)
    {
        const double a = result.row(v, first, first_baseline).mean_rate;
        const double b = result.row(v, second, second_baseline).mean_rate;
        if (!(a >= b - slack))
            check.ok = false;
        detail << num(v) << ": " << num(a) << " vs " << num(b) << "; ";
    }
    check.detail = detail.str();
    return check;
}

} // namespace pinch

// SPDX-License-Identifier: Apache-2.0
#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "pinch/harness.hpp"
#include "pinch/io.hpp"
#include "pinch/solution.hpp"
#include "pinch/ula.hpp"
#include "pinch/validate.hpp"

namespace
{

using namespace pinch;

struct SolveArgs
{
    std::string config;
    std::string topology;
    std::string scheme = "tin";
    bool baseline = false;
    bool equal_time = false;
    std::uint64_t seed = 1;
    int groups = 4;
    int users = 12;
    std::string out;
};

void add_solve_options(CLI::App *cmd, SolveArgs &a)
{
    cmd->add_option("--config", a.config, "System config JSON");
    cmd->add_option("--topology", a.topology, "Topology JSON; generated from --seed when omitted");
    cmd->add_option("--scheme", a.scheme, "tin | noma | tdma-ps | tdma-pm")->capture_default_str();
    cmd->add_flag("--baseline", a.baseline, "Use the fixed-array baseline");
    cmd->add_flag("--equal-time", a.equal_time, "Force equal TDMA slots");
    cmd->add_option("--seed", a.seed, "Seed for the generated topology and initial placement")->capture_default_str();
    cmd->add_option("--groups", a.groups, "Groups of a generated topology")->capture_default_str();
    cmd->add_option("--users", a.users, "Users of a generated topology")->capture_default_str();
    cmd->add_option("--out", a.out, "Output file; stdout when omitted");
}

SchemeSolution run_solve(const SolveArgs &a)
{
    SystemConfig config = a.config.empty() ? SystemConfig{} : load_config(a.config);
    if (a.equal_time)
        config.equal_time = true;
    const Scheme scheme = parse_scheme(a.scheme);

    ExperimentSpec layout;
    layout.num_groups = a.groups;
    layout.num_users = a.users;
    Rng rng = child_stream(a.seed, 0);
    const Topology topology =
        a.topology.empty() ? generate_topology(TopologyMode::uniform_random, config, layout.group_sizes_at(0.0), rng)
                           : load_topology(a.topology);
    if (a.baseline)
        return solve_ula(topology, scheme, config);
    const Placement initial = random_placement(CandidateGrid::from_config(config),
                                               static_cast<std::size_t>(config.num_antennas), config, rng);
    return solve_scheme(scheme, topology, config, initial);
}

void output(const std::string &text, const std::string &path)
{
    if (path.empty())
        std::cout << text;
    else
        write_text_file(path, text);
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Max-min fair multigroup multicast with pinching antennas"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto *solve = app.add_subcommand("solve", "Solve one topology with one scheme and print the solution as JSON");
    add_solve_options(solve, solve_args);

    SolveArgs trace_args;
    auto *trace = app.add_subcommand("trace", "Solve one topology and print the convergence trace as CSV");
    add_solve_options(trace, trace_args);

    std::string spec_path;
    std::string preset;
    std::string exp_config;
    std::optional<int> trials;
    std::optional<std::uint64_t> exp_seed;
    std::string out_dir = "results";
    bool exp_equal_time = false;
    bool serial = false;
    auto *experiment = app.add_subcommand("experiment", "Run a Monte-Carlo sweep and write CSV files");
    auto *spec_opt = experiment->add_option("--spec", spec_path, "Experiment spec JSON");
    experiment->add_option("--preset", preset, "Built-in figure recipe: fig3 .. fig7")->excludes(spec_opt);
    experiment->add_option("--config", exp_config, "System config JSON replacing the spec's config");
    experiment->add_option("--trials", trials, "Override the trial count");
    experiment->add_option("--seed", exp_seed, "Override the seed");
    experiment->add_option("--out", out_dir, "Output directory")->capture_default_str();
    experiment->add_flag("--equal-time", exp_equal_time, "Force equal TDMA slots");
    experiment->add_flag("--serial", serial, "Run trials on one thread");

    std::uint64_t validate_seed = 1;
    auto *validate = app.add_subcommand("validate", "Run the built-in self-checks");
    validate->add_option("--seed", validate_seed, "Seed")->capture_default_str();

    std::string gen_config;
    std::uint64_t gen_seed = 1;
    int gen_groups = 4;
    int gen_users = 12;
    std::string gen_mode = "uniform_random";
    std::string gen_out;
    auto *generate = app.add_subcommand("generate", "Write a random topology as JSON");
    generate->add_option("--config", gen_config, "System config JSON");
    generate->add_option("--seed", gen_seed, "Seed")->capture_default_str();
    generate->add_option("--groups", gen_groups, "Number of groups")->capture_default_str();
    generate->add_option("--users", gen_users, "Total number of users")->capture_default_str();
    generate->add_option("--mode", gen_mode, "uniform_random | heterogeneous_clusters")->capture_default_str();
    generate->add_option("--out", gen_out, "Output file; stdout when omitted");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*solve)
        {
            output(solution_to_json(run_solve(solve_args)).dump(2) + "\n", solve_args.out);
        }
        else if (*trace)
        {
            output(trace_csv(run_solve(trace_args)), trace_args.out);
        }
        else if (*experiment)
        {
            if (spec_path.empty() && preset.empty())
                throw std::invalid_argument("experiment: give --spec or --preset");
            ExperimentSpec spec = spec_path.empty() ? preset_spec(preset) : load_spec(spec_path);
            if (!exp_config.empty())
                spec.config = load_config(exp_config);
            if (trials)
                spec.trials = *trials;
            if (exp_seed)
                spec.seed = *exp_seed;
            if (exp_equal_time)
                spec.config.equal_time = true;
            if (serial)
                spec.config.execution = Execution::serial;
            const ExperimentResult result = run_experiment(spec);
            emit(result, out_dir);
            std::cout << summary_csv(result);
        }
        else if (*validate)
        {
            bool all = true;
            for (const auto &c : run_validation(validate_seed))
            {
                std::cout << (c.ok ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
                all = all && c.ok;
            }
            return all ? 0 : 1;
        }
        else if (*generate)
        {
            const SystemConfig config = gen_config.empty() ? SystemConfig{} : load_config(gen_config);
            ExperimentSpec layout;
            layout.num_groups = gen_groups;
            layout.num_users = gen_users;
            Rng rng = child_stream(gen_seed, 0);
            const Topology t =
                generate_topology(parse_topology_mode(gen_mode), config, layout.group_sizes_at(0.0), rng);
            output(topology_to_json(t).dump(2) + "\n", gen_out);
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pinch/config.hpp"
#include "pinch/geometry.hpp"
#include "pinch/io.hpp"
#include "pinch/rng.hpp"
#include "pinch/solution.hpp"

namespace pinch
{

enum class SweepVariable
{
    power_dbm,
    region_dx,
    num_antennas,
    num_groups
};

enum class TopologyMode
{
    uniform_random,
    heterogeneous_clusters // group g confined to the g-th of G equal x-intervals
};

SweepVariable parse_sweep_variable(std::string_view name);
std::string_view to_string(SweepVariable v);
TopologyMode parse_topology_mode(std::string_view name);
std::string_view to_string(TopologyMode mode);

struct ExperimentSpec
{
    SweepVariable sweep = SweepVariable::power_dbm;
    std::vector<double> values{-10.0};
    std::vector<Scheme> schemes{Scheme::tin, Scheme::noma, Scheme::tdma_ps, Scheme::tdma_pm};
    bool pass = true;      // pinching-antenna solvers
    bool baseline = false; // fixed-array solvers
    TopologyMode topology_mode = TopologyMode::uniform_random;
    int trials = 1000;
    std::uint64_t seed = 1;
    int num_groups = 4;
    int num_users = 12;                    // split as evenly as possible over the groups
    std::optional<int> users_per_group;    // overrides num_users when set
    SystemConfig config;

    /// Throws std::invalid_argument on an unusable spec.
    void validate() const;
    /// Config and group sizes after applying one sweep value.
    SystemConfig config_at(double value) const;
    std::vector<std::size_t> group_sizes_at(double value) const;
};

/// Keys: sweep, values, schemes, pass, baseline, topology_mode, trials, seed,
/// num_groups, num_users, users_per_group, config (a config object).
ExperimentSpec spec_from_json(const json &j);
json spec_to_json(const ExperimentSpec &spec);
ExperimentSpec load_spec(const std::filesystem::path &path);

/// Figure recipes: "fig3" power sweep, "fig4" clustered power sweep, "fig5"
/// region length, "fig6" antenna count, "fig7" group count.
ExperimentSpec preset_spec(std::string_view name);
std::vector<std::string> preset_names();

Topology generate_topology(TopologyMode mode, const SystemConfig &config, std::span<const std::size_t> group_sizes,
                           Rng &rng);

struct TrialRecord
{
    double sweep_value = 0.0;
    Scheme scheme = Scheme::tin;
    bool baseline = false;
    int trial = 0;
    bool ok = false;
    double mmf_rate = 0.0;
    int iterations = 0;
    std::string error;
};

struct SummaryRow
{
    double sweep_value = 0.0;
    Scheme scheme = Scheme::tin;
    bool baseline = false;
    double mean_rate = 0.0;
    double stderr_rate = 0.0;
    int trials_ok = 0;
    int trials_failed = 0;
};

struct ExperimentResult
{
    ExperimentSpec spec;
    std::vector<SummaryRow> summary; // sweep value major, then scheme, then PASS before baseline
    std::vector<TrialRecord> trials; // same order, then trial index

    const SummaryRow &row(double sweep_value, Scheme scheme, bool baseline) const;
};

/// Every trial uses its own child stream of spec.seed, shared by all sweep
/// values and schemes. Trials run in parallel unless config.execution is
/// serial; the result does not depend on it.
ExperimentResult run_experiment(const ExperimentSpec &spec);

/// Header: sweep_value,scheme,baseline,mean_rate,stderr,trials_ok,trials_failed
std::string summary_csv(const ExperimentResult &result);
/// Header: sweep_value,scheme,baseline,trial,ok,mmf_rate,iterations,error
std::string trials_csv(const ExperimentResult &result);
/// Header: scheme,baseline,slot,sweep,objective,progress,stage2_evaluations,total_candidates
std::string trace_csv(const SchemeSolution &solution);
/// Describes the run, including the cluster geometry of the topology mode.
json experiment_metadata(const ExperimentResult &result);

/// Writes summary.csv, trials.csv and metadata.json into out_dir. An empty
/// result is rejected before anything is written.
void emit(const ExperimentResult &result, const std::filesystem::path &out_dir);

enum class Trend
{
    strictly_decreasing,
    non_decreasing
};

struct TrendCheck
{
    bool ok = true;
    std::string detail;
};

/// Mean rate of (scheme, baseline) across the sweep values, in spec order.
TrendCheck check_trend(const ExperimentResult &result, Scheme scheme, bool baseline, Trend trend,
                       double slack = 0.0);
/// mean(first) >= mean(second) - slack at every sweep value.
TrendCheck check_dominance(const ExperimentResult &result, Scheme first, bool first_baseline, Scheme second,
                           bool second_baseline, double slack = 0.0);

} // namespace pinch

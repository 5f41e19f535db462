// SPDX-License-Identifier: Apache-2.0
// Serial reference against the OpenMP kernels: candidate scoring and the trial loop.
#include <benchmark/benchmark.h>

#include <vector>

#include "pinch/harness.hpp"
#include "pinch/noma.hpp"
#include "pinch/seo.hpp"
#include "pinch/tdma.hpp"

namespace
{

using namespace pinch;

struct Instance
{
    SystemConfig config;
    Topology topology;
    Placement placement;
};

Instance make_instance()
{
    Instance in;
    Rng rng = child_stream(7, 0);
    const std::size_t sizes[] = {3, 3, 3, 3};
    in.topology = generate_topology(TopologyMode::uniform_random, in.config, sizes, rng);
    in.placement = random_placement(CandidateGrid::from_config(in.config), 10, in.config, rng);
    return in;
}

void score(benchmark::State &state, Execution execution, bool pm)
{
    const Instance in = make_instance();
    const double p_t = in.config.power_budget_w;
    const SystemConfig &config = in.config;
    PinchingModel model(in.topology, config, in.placement.size());
    GainFunction rate = pm ? GainFunction([&](const GroupGains &g) { return pm_resource_allocation(g.a, p_t).rate; })
                           : GainFunction([&](const GroupGains &g) { return noma_power(g.a, p_t, config).sinr; });
    GainScorer scorer(model, in.topology, rate);
    scorer.bind(in.placement.x_m, 0);
    const auto cands = CandidateGrid::from_config(config).points;
    std::vector<double> out(cands.size());
    for (auto _ : state)
    {
        score_candidates(scorer, cands, out, execution);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(cands.size()));
}

void trials(benchmark::State &state, Execution execution)
{
    ExperimentSpec spec;
    spec.schemes = {Scheme::tin, Scheme::noma};
    spec.trials = 4;
    spec.config.execution = execution;
    for (auto _ : state)
        benchmark::DoNotOptimize(run_experiment(spec).summary.size());
}

} // namespace

BENCHMARK_CAPTURE(score, noma_serial, Execution::serial, false);
BENCHMARK_CAPTURE(score, noma_parallel, Execution::parallel, false);
BENCHMARK_CAPTURE(score, pm_serial, Execution::serial, true);
BENCHMARK_CAPTURE(score, pm_parallel, Execution::parallel, true);
BENCHMARK_CAPTURE(trials, serial, Execution::serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(trials, parallel, Execution::parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

// SPDX-License-Identifier: Apache-2.0
#include "pinch/solution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pinch
{

Scheme parse_scheme(std::string_view name)
{
    std::string key(name);
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "tin")
        return Scheme::tin;
    if (key == "noma")
        return Scheme::noma;
    if (key == "tdma-ps")
        return Scheme::tdma_ps;
    if (key == "tdma-pm")
        return Scheme::tdma_pm;
    throw std::invalid_argument("unknown scheme '" + std::string(name) + "' (expected tin, noma, tdma-ps or tdma-pm)");
}

std::string_view to_string(Scheme scheme)
{
    switch (scheme)
    {
    case Scheme::tin:
        return "tin";
    case Scheme::noma:
        return "noma";
    case Scheme::tdma_ps:
        return "tdma-ps";
    case Scheme::tdma_pm:
        return "tdma-pm";
    }
    return "unknown";
}

std::vector<Scheme> all_schemes()
{
    return {Scheme::tin, Scheme::noma, Scheme::tdma_ps, Scheme::tdma_pm};
}

TraceSummary TraceSummary::from(const SweepTrace &trace)
{
    TraceSummary s;
    s.iterations = trace.iterations;
    s.converged = trace.converged;
    s.stage2_evaluations = trace.stage2_evaluations;
    s.total_candidates = trace.total_candidates;
    s.objective = trace.objective;
    s.progress = trace.progress;
    return s;
}

double TraceSummary::retention_ratio() const
{
    if (total_candidates == 0)
        return 0.0;
    return static_cast<double>(stage2_evaluations) / static_cast<double>(total_candidates);
}

namespace
{

int max_iterations(const std::vector<TraceSummary> &traces)
{
    int n = 0;
    for (const auto &t : traces)
        n = std::max(n, t.iterations);
    return n;
}

} // namespace

SchemeSolution to_scheme_solution(const TinSolution &tin)
{
    SchemeSolution s;
    s.scheme = Scheme::tin;
    s.placements = {tin.placement};
    s.gains = tin.gains.a;
    s.power_w = tin.power_w;
    s.group_rates = tin.group_rates;
    s.mmf_rate = tin.mmf_rate;
    s.traces = {TraceSummary::from(tin.trace)};
    s.iterations = max_iterations(s.traces);
    return s;
}

SchemeSolution to_scheme_solution(const NomaSolution &noma)
{
    SchemeSolution s;
    s.scheme = Scheme::noma;
    s.placements = {noma.placement};
    s.gains = noma.gains.a;
    s.power_w = noma.power_w;
    s.group_rates = noma.group_rates;
    s.decoding_order = noma.order.order;
    s.sic_feasibility_margin = noma.sic_feasibility_margin;
    s.mmf_rate = noma.mmf_rate;
    s.traces = {TraceSummary::from(noma.trace)};
    s.iterations = max_iterations(s.traces);
    return s;
}

SchemeSolution to_scheme_solution(const TdmaSolution &tdma)
{
    SchemeSolution s;
    s.scheme = tdma.protocol == TdmaProtocol::switching ? Scheme::tdma_ps : Scheme::tdma_pm;
    s.placements = tdma.placements;
    s.gains = tdma.gains;
    s.power_w = tdma.allocation.power_w;
    s.tau = tdma.allocation.tau;
    s.group_rates = tdma.group_rates;
    s.mmf_rate = tdma.mmf_rate;
    for (const auto &t : tdma.traces)
        s.traces.push_back(TraceSummary::from(t));
    s.iterations = max_iterations(s.traces);
    return s;
}

void allocate_resources(SchemeSolution &solution, std::span<const double> gains, const SystemConfig &config)
{
    const double p_t = config.power_budget_w;
    solution.gains.assign(gains.begin(), gains.end());
    solution.tau.clear();
    solution.group_rates.clear();
    solution.decoding_order.clear();
    switch (solution.scheme)
    {
    case Scheme::tin:
    {
        TinPower power = tin_power(gains, p_t);
        solution.power_w = std::move(power.power_w);
        for (double s : tin_group_sinrs(gains, solution.power_w))
            solution.group_rates.push_back(std::log2(1.0 + s));
        solution.mmf_rate = std::log2(1.0 + power.sinr);
        break;
    }
    case Scheme::noma:
    {
        NomaPower power = noma_power(gains, p_t, config);
        solution.power_w = std::move(power.power_w);
        for (double s : noma_group_sinrs(gains, solution.power_w, power.order))
            solution.group_rates.push_back(std::log2(1.0 + s));
        solution.decoding_order = power.order.order;
        solution.mmf_rate = std::log2(1.0 + power.sinr);
        break;
    }
    case Scheme::tdma_ps:
    case Scheme::tdma_pm:
    {
        TdmaAllocation alloc = tdma_allocation(gains, p_t, config);
        solution.group_rates = tdma_group_rates(gains, alloc.allocation);
        solution.power_w = std::move(alloc.allocation.power_w);
        solution.tau = std::move(alloc.allocation.tau);
        solution.mmf_rate = alloc.rate;
        break;
    }
    }
}

SchemeSolution solve_scheme(Scheme scheme, const Topology &topology, const SystemConfig &config,
                            const Placement &initial)
{
    switch (scheme)
    {
    case Scheme::tin:
        return to_scheme_solution(solve_tin(topology, config, initial));
    case Scheme::noma:
        return to_scheme_solution(solve_noma(topology, config, initial));
    case Scheme::tdma_ps:
        return to_scheme_solution(solve_tdma_ps(topology, config, initial));
    case Scheme::tdma_pm:
        return to_scheme_solution(solve_tdma_pm(topology, config, initial));
    }
    throw std::invalid_argument("solve_scheme: unknown scheme");
}

} // namespace pinch

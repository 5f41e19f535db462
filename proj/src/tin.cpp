// SPDX-License-Identifier: Apache-2.0
#include "pinch/tin.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pinch
{

TinPower tin_power(std::span<const double> gains, double p_t)
{
    if (gains.empty())
        throw std::invalid_argument("tin_power: no groups");
    double denom = -1.0;
    for (double a : gains)
    {
        if (!(a > 0.0))
            throw std::invalid_argument("tin_power: gains must be positive");
        denom += 1.0 + 1.0 / (p_t * a);
    }
    TinPower out;
    out.sinr = 1.0 / denom;
    out.power_w.resize(gains.size());
    for (std::size_t g = 0; g < gains.size(); ++g)
        out.power_w[g] = out.sinr * (p_t + 1.0 / gains[g]) / (1.0 + out.sinr);
    return out;
}

double tin_sinr_from_inv_sum(double inv_sum, std::size_t num_groups, double p_t)
{
    return 1.0 / (static_cast<double>(num_groups) - 1.0 + inv_sum / p_t);
}

std::vector<double> tin_group_sinrs(std::span<const double> gains, std::span<const double> power_w)
{
    double total = 0.0;
    for (double p : power_w)
        total += p;
    std::vector<double> sinr(gains.size());
    for (std::size_t g = 0; g < gains.size(); ++g)
        sinr[g] = power_w[g] * gains[g] / ((total - power_w[g]) * gains[g] + 1.0);
    return sinr;
}

double tin_ceiling(std::size_t num_groups)
{
    if (num_groups < 2)
        throw std::invalid_argument("tin_ceiling: needs at least two interfering groups");
    return std::log2(1.0 + 1.0 / (static_cast<double>(num_groups) - 1.0));
}

double tin_placement_objective(const Placement &placement, const Topology &topology, const SystemConfig &config)
{
    return group_gains(placement, topology, config).inv_sum;
}

TinSolution solve_tin(const Topology &topology, const SystemConfig &config, const Placement &initial)
{
    const std::size_t num_groups = topology.num_groups();
    const double p_t = config.power_budget_w;
    PinchingModel model(topology, config, initial.size());
    GainScorer scorer(model, topology, [](const GroupGains &g) { return g.inv_sum; });
    // Convergence is judged on the rate implied by f_A.
    auto rate = [=](double inv_sum) { return std::log2(1.0 + tin_sinr_from_inv_sum(inv_sum, num_groups, p_t)); };
    PlacementSweep sweep = seo_sweep(initial, scorer, SweepMode::minimize, config, rate);

    TinSolution out;
    out.placement = std::move(sweep.placement);
    out.trace = std::move(sweep.trace);
    out.gains = group_gains(out.placement, topology, config);
    TinPower power = tin_power(out.gains.a, p_t);
    out.equalized_sinr = power.sinr;
    out.power_w = std::move(power.power_w);
    out.mmf_rate = std::log2(1.0 + out.equalized_sinr);
    for (double s : tin_group_sinrs(out.gains.a, out.power_w))
        out.group_rates.push_back(std::log2(1.0 + s));
    out.ceiling_rate = num_groups >= 2 ? tin_ceiling(num_groups) : std::numeric_limits<double>::infinity();
    return out;
}

} // namespace pinch

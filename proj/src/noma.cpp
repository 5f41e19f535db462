// SPDX-License-Identifier: Apache-2.0
#include "pinch/noma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace pinch
{

DecodingOrder decoding_order(std::span<const double> gains)
{
    DecodingOrder out;
    out.order.resize(gains.size());
    std::iota(out.order.begin(), out.order.end(), std::size_t{0});
    std::stable_sort(out.order.begin(), out.order.end(),
                     [&](std::size_t i, std::size_t j) { return gains[i] < gains[j]; });
    out.sorted_gains.reserve(gains.size());
    for (std::size_t g : out.order)
        out.sorted_gains.push_back(gains[g]);
    return out;
}

TwoGroupPower two_group_power(double a_strong, double a_weak, double p_t)
{
    if (!(a_weak > 0.0) || a_strong < a_weak)
        throw std::invalid_argument("two_group_power: requires a_strong >= a_weak > 0");
    const double s = a_strong + a_weak;
    // Root of a_s a_w P^2 + (a_s + a_w) P - p_t a_w = 0, written without the
    // cancellation of the textbook form.
    const double root = std::sqrt(s * s + 4.0 * p_t * a_strong * a_weak * a_weak);
    TwoGroupPower out;
    out.strong_w = 2.0 * p_t * a_weak / (root + s);
    out.weak_w = p_t - out.strong_w;
    out.sinr = out.strong_w * a_strong;
    return out;
}

RecursivePower recursive_power(std::span<const double> sorted_gains, double sinr)
{
    RecursivePower out;
    out.power_w.assign(sorted_gains.size(), 0.0);
    double stronger = 0.0; // sum of powers at positions > k
    for (std::size_t k = sorted_gains.size(); k-- > 0;)
    {
        out.power_w[k] = sinr * (1.0 / sorted_gains[k] + stronger);
        stronger += out.power_w[k];
    }
    out.total = stronger;
    return out;
}

double single_pa_required_power(std::span<const double> sorted_gains, double sinr)
{
    double total = 0.0;
    double growth = 1.0; // (1 + sinr)^(g-1)
    for (double a : sorted_gains)
    {
        total += sinr * growth / a;
        growth *= 1.0 + sinr;
    }
    return total;
}

namespace
{

std::vector<double> by_group(const DecodingOrder &order, std::span<const double> by_position)
{
    std::vector<double> out(order.order.size());
    for (std::size_t k = 0; k < order.order.size(); ++k)
        out[order.order[k]] = by_position[k];
    return out;
}

void check_gains(std::span<const double> gains, const char *who)
{
    if (gains.empty())
        throw std::invalid_argument(std::string(who) + ": no groups");
    for (double a : gains)
        if (!(a > 0.0))
            throw std::invalid_argument(std::string(who) + ": gains must be positive");
}

} // namespace

NomaPower noma_mmf_bisection(std::span<const double> gains, double p_t, double rel_tol, int max_iters)
{
    check_gains(gains, "noma_mmf_bisection");
    NomaPower out;
    out.order = decoding_order(gains);
    const auto &sorted = out.order.sorted_gains;

    if (gains.size() == 1)
    {
        out.sinr = p_t * sorted[0];
        out.power_w = {p_t};
        return out;
    }

    double lo = 0.0;
    double hi = p_t * sorted.front();
    while (hi - lo > rel_tol * hi && out.iterations < max_iters)
    {
        const double mid = 0.5 * (lo + hi);
        if (recursive_power(sorted, mid).total <= p_t)
            lo = mid;
        else
            hi = mid;
        ++out.iterations;
    }
    out.sinr = lo;
    out.power_w = by_group(out.order, recursive_power(sorted, lo).power_w);
    return out;
}

NomaPower noma_power(std::span<const double> gains, double p_t, const SystemConfig &config)
{
    if (gains.size() != 2)
        return noma_mmf_bisection(gains, p_t, config.bisection_rel_tol, config.bisection_max_iters);
    check_gains(gains, "noma_power");
    NomaPower out;
    out.order = decoding_order(gains);
    const TwoGroupPower two = two_group_power(out.order.sorted_gains[1], out.order.sorted_gains[0], p_t);
    out.sinr = two.sinr;
    const double by_position[2] = {two.weak_w, two.strong_w};
    out.power_w = by_group(out.order, by_position);
    return out;
}

double noma_upper_bound(std::span<const double> gains, double p_t)
{
    return std::log2(1.0 + p_t * *std::min_element(gains.begin(), gains.end()));
}

std::vector<double> noma_group_sinrs(std::span<const double> gains, std::span<const double> power_w,
                                     const DecodingOrder &order)
{
    std::vector<double> sinr(gains.size());
    double stronger = 0.0;
    for (std::size_t k = order.order.size(); k-- > 0;)
    {
        const std::size_t g = order.order[k];
        sinr[g] = power_w[g] * gains[g] / (stronger * gains[g] + 1.0);
        stronger += power_w[g];
    }
    return sinr;
}

double sic_feasibility_margin(std::span<const double> user_cnr, const Topology &topology,
                              std::span<const double> power_w, const DecodingOrder &order)
{
    const std::size_t num_groups = order.order.size();
    // stronger[k] = sum of powers of groups decoded after position k
    std::vector<double> stronger(num_groups, 0.0);
    for (std::size_t k = num_groups - 1; k-- > 0;)
        stronger[k] = stronger[k + 1] + power_w[order.order[k + 1]];

    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < num_groups; ++k)
    {
        const std::size_t weak = order.order[k];
        double bottleneck = std::numeric_limits<double>::infinity();
        for (std::size_t u : topology.groups[weak])
            bottleneck = std::min(bottleneck, power_w[weak] * user_cnr[u] / (stronger[k] * user_cnr[u] + 1.0));
        for (std::size_t t = k + 1; t < num_groups; ++t)
            for (std::size_t u : topology.groups[order.order[t]])
            {
                const double cross = power_w[weak] * user_cnr[u] / (stronger[k] * user_cnr[u] + 1.0);
                margin = std::min(margin, cross - bottleneck);
            }
    }
    return margin;
}

double single_pa_asymptotic_objective(double x, const Topology &topology, const SystemConfig &config,
                                      SnrRegime regime)
{
    const GroupGains gains = group_gains(Placement{{x}}, topology, config);
    const double p_t = config.power_budget_w;
    if (regime == SnrRegime::low)
        return p_t / gains.inv_sum;
    const DecodingOrder order = decoding_order(gains.a);
    double score = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < order.sorted_gains.size(); ++k)
        score = std::min(score, std::pow(p_t * order.sorted_gains[k], 1.0 / static_cast<double>(k + 1)));
    return score;
}

NomaSolution solve_noma(const Topology &topology, const SystemConfig &config, const Placement &initial)
{
    const double p_t = config.power_budget_w;
    const std::size_t num_groups = topology.num_groups();
    PinchingModel model(topology, config, initial.size());

    // Closed form covers one and two groups; beyond that the bisection is
    // screened by the full-power bound.
    GainFunction rate = [&](const GroupGains &g) { return std::log2(1.0 + noma_power(g.a, p_t, config).sinr); };
    GainFunction bound = [p_t](const GroupGains &g) { return noma_upper_bound(g.a, p_t); };

    PlacementSweep sweep;
    if (num_groups > 2 && config.use_hoe)
    {
        GainScorer scorer(model, topology, rate, bound);
        sweep = hoe_sweep(initial, scorer, config);
    }
    else
    {
        GainScorer scorer(model, topology, rate);
        sweep = seo_sweep(initial, scorer, SweepMode::maximize, config);
    }

    NomaSolution out;
    out.placement = std::move(sweep.placement);
    out.trace = std::move(sweep.trace);
    const std::vector<double> cnr = user_cnrs(out.placement, topology, config);
    out.gains = gains_from_cnrs(cnr, topology);
    NomaPower power = noma_power(out.gains.a, p_t, config);
    out.equalized_sinr = power.sinr;
    out.power_w = std::move(power.power_w);
    out.order = std::move(power.order);
    out.mmf_rate = std::log2(1.0 + out.equalized_sinr);
    for (double s : noma_group_sinrs(out.gains.a, out.power_w, out.order))
        out.group_rates.push_back(std::log2(1.0 + s));
    out.sic_feasibility_margin = sic_feasibility_margin(cnr, topology, out.power_w, out.order);
    return out;
}

} // namespace pinch

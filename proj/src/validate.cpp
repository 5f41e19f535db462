// SPDX-License-Identifier: Apache-2.0
#include "pinch/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>

#include "pinch/harness.hpp"
#include "pinch/noma.hpp"
#include "pinch/tdma.hpp"
#include "pinch/tin.hpp"
#include "pinch/ula.hpp"

namespace pinch
{

namespace
{

double rel(double a, double b)
{
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

std::vector<double> random_gains(Rng &rng, std::size_t g)
{
    std::vector<double> a(g);
    for (auto &x : a)
        x = std::pow(10.0, uniform(rng, -1.0, 3.0));
    return a;
}

std::string fmt(const char *label, double v)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s %.3g", label, v);
    return buf;
}

ValidationCheck tin_equalization(Rng &rng)
{
    double worst = 0.0;
    for (int i = 0; i < 50; ++i)
    {
        const auto a = random_gains(rng, 2 + uniform_index(rng, 4));
        const TinPower p = tin_power(a, 1.0);
        for (double s : tin_group_sinrs(a, p.power_w))
            worst = std::max(worst, rel(s, p.sinr));
    }
    return {"tin equalized sinr", worst <= 1e-9, fmt("max rel error", worst)};
}

ValidationCheck noma_recursion(Rng &rng)
{
    double worst = 0.0;
    for (int i = 0; i < 200; ++i)
    {
        auto a = random_gains(rng, 1 + uniform_index(rng, 6));
        std::sort(a.begin(), a.end());
        const double sinr = uniform(rng, 0.01, 10.0);
        worst = std::max(worst, rel(recursive_power(a, sinr).total, single_pa_required_power(a, sinr)));
    }
    return {"noma recursion closed form", worst <= 1e-12, fmt("max rel error", worst)};
}

ValidationCheck noma_two_group(Rng &rng)
{
    double worst = 0.0;
    for (int i = 0; i < 50; ++i)
    {
        const auto a = random_gains(rng, 2);
        const double strong = std::max(a[0], a[1]);
        const double weak = std::min(a[0], a[1]);
        const double p_t = uniform(rng, 0.1, 10.0);
        worst = std::max(worst, rel(noma_mmf_bisection(a, p_t).sinr, two_group_power(strong, weak, p_t).sinr));
    }
    return {"noma bisection vs two-group closed form", worst <= 1e-6, fmt("max rel error", worst)};
}

ValidationCheck tdma_kkt(Rng &rng)
{
    double worst = 0.0;
    for (int i = 0; i < 30; ++i)
    {
        const auto a = random_gains(rng, 2 + uniform_index(rng, 4));
        const double p_t = uniform(rng, 0.1, 10.0);
        const TdmaAllocation r = pm_resource_allocation(a, p_t);
        double tau = 0.0;
        double energy = 0.0;
        for (std::size_t g = 0; g < a.size(); ++g)
        {
            tau += r.allocation.tau[g];
            energy += r.allocation.energy_w[g];
            worst = std::max(worst, rel(-min_energy_slope(a[g], r.rate, r.allocation.tau[g]), r.allocation.nu));
        }
        for (double rate : tdma_group_rates(a, r.allocation))
            worst = std::max(worst, rel(rate, r.rate));
        worst = std::max({worst, std::abs(tau - 1.0), rel(energy, p_t)});
    }
    return {"tdma optimality conditions", worst <= 1e-6, fmt("max residual", worst)};
}

ValidationCheck hoe_equivalence(std::uint64_t seed)
{
    SystemConfig config;
    config.num_antennas = 3;
    config.grid_points = 40;
    config.execution = Execution::serial;
    double worst = 0.0;
    bool same = true;
    for (int i = 0; i < 3; ++i)
    {
        Rng rng = child_stream(seed, 1000 + i);
        const std::size_t sizes[] = {2, 2, 2};
        const Topology t = generate_topology(TopologyMode::uniform_random, config, sizes, rng);
        const Placement init = random_placement(CandidateGrid::from_config(config), 3, config, rng);
        SystemConfig plain = config;
        plain.use_hoe = false;
        const NomaSolution a = solve_noma(t, config, init);
        const NomaSolution b = solve_noma(t, plain, init);
        worst = std::max(worst, std::abs(a.mmf_rate - b.mmf_rate));
        same = same && a.placement.x_m == b.placement.x_m;
    }
    return {"hoe matches plain search", same && worst <= 1e-12, fmt("max rate gap", worst)};
}

ValidationCheck ula_coherent_bound(Rng &rng)
{
    SystemConfig config;
    UlaConfig ula;
    ula.num_elements = 4;
    bool ok = true;
    for (int i = 0; i < 20; ++i)
    {
        const Point3 user{uniform(rng, 0.0, 20.0), uniform(rng, 0.0, 6.0), 0.0};
        std::vector<double> phases(4);
        for (auto &p : phases)
            p = uniform(rng, 0.0, 6.283185307179586);
        double bound = 0.0;
        Topology single{{{0}}, {user}, {1.0}};
        const UlaModel model(single, config, ula);
        for (std::size_t n = 0; n < 4; ++n)
            bound += std::abs(model.contribution(n, 0.0, 0));
        ok = ok && std::abs(ula_effective_channel(phases, user, config, ula)) <= bound * (1.0 + 1e-12);
    }
    return {"ula magnitude within coherent bound", ok, ok ? "all samples" : "bound exceeded"};
}

} // namespace

std::vector<ValidationCheck> run_validation(std::uint64_t seed)
{
    Rng rng = child_stream(seed, 0);
    std::vector<std::function<ValidationCheck()>> checks = {
        [&] { return tin_equalization(rng); },   [&] { return noma_recursion(rng); },
        [&] { return noma_two_group(rng); },     [&] { return tdma_kkt(rng); },
        [&] { return hoe_equivalence(seed); },   [&] { return ula_coherent_bound(rng); },
    };
    std::vector<ValidationCheck> out;
    for (auto &check : checks)
    {
        try
        {
            out.push_back(check());
        }
        catch (const std::exception &e)
        {
            out.push_back({"exception", false, e.what()});
        }
    }
    return out;
}

} // namespace pinch

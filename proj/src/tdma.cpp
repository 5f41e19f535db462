// SPDX-License-Identifier: Apache-2.0
#include "pinch/tdma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/toms748_solve.hpp>

namespace pinch
{

namespace
{

constexpr double ln2 = std::numbers::ln2;
// Exponents t ln2 / tau beyond this would overflow 2^(t/tau) for t/tau > 700.
constexpr double exponent_cap = 700.0 * std::numbers::ln2;
constexpr double inf = std::numeric_limits<double>::infinity();

// phi(u) = e^u (u - 1) + 1, so that min_energy_slope = -phi(t ln2 / tau) / a.
double phi(double u)
{
    if (u < 0.05)
    {
        // sum_{k>=2} (k-1) u^k / k!
        double term = u * u / 2.0; // u^k / k! at k = 2
        double sum = term;
        for (int k = 3; k < 12; ++k)
        {
            term *= u / k;
            sum += (k - 1) * term;
        }
        return sum;
    }
    return u * std::exp(u) - std::expm1(u);
}

// Inverse of phi on (0, cap]. Newton started to the right of the root
// descends monotonically because phi is increasing and convex.
double phi_inverse(double c)
{
    if (!(c > 0.0))
        return 0.0;
    if (c >= phi(exponent_cap))
        return exponent_cap;
    double u = c < 1.0 ? std::sqrt(2.0 * c) : std::log(c) + 2.0;
    u = std::min(u, exponent_cap);
    for (int it = 0; it < 200; ++it)
    {
        const double excess = phi(u) - c;
        if (excess <= 0.0)
            break;
        const double step = excess / (u * std::exp(u));
        u -= step;
        if (step <= 4.0 * std::numeric_limits<double>::epsilon() * u)
            break;
    }
    return u;
}

struct Bracket
{
    double lo;
    double hi;
};

template <class F, class Tol>
Bracket solve_bracketed(F f, double lo, double hi, double f_lo, double f_hi, Tol tol)
{
    std::uintmax_t max_iter = 200;
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, tol, max_iter);
    return Bracket{r.first, r.second};
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

double min_energy(double a, double t, double tau)
{
    if (t <= 0.0)
        return 0.0;
    const double u = t * ln2 / tau;
    if (u > exponent_cap)
        return inf;
    return tau / a * std::expm1(u);
}

double min_energy_slope(double a, double t, double tau)
{
    const double u = t * ln2 / tau;
    if (u > exponent_cap)
        return -inf;
    return -phi(u) / a;
}

double tau_from_nu(double a, double t, double nu)
{
    if (!(nu > 0.0))
        throw std::invalid_argument("tau_from_nu: no root for non-positive multiplier");
    if (!(t > 0.0) || !(a > 0.0))
        throw std::invalid_argument("tau_from_nu: requires t > 0 and a > 0");
    return t * ln2 / phi_inverse(a * nu);
}

EnergyMinimum min_total_energy(std::span<const double> gains, double t)
{
    check_gains(gains, "min_total_energy");
    const std::size_t num_groups = gains.size();
    EnergyMinimum out;
    out.tau.assign(num_groups, 1.0 / static_cast<double>(num_groups));
    out.energy_w.assign(num_groups, 0.0);
    if (t <= 0.0)
        return out;

    if (num_groups == 1)
    {
        out.tau[0] = 1.0;
        out.nu = phi(t * ln2) / gains[0];
    }
    else
    {
        // u_g(nu) = phi^-1(a_g nu) does not depend on t, and
        // sum_g tau_g = t ln2 sum_g 1/u_g is decreasing in nu.
        auto time_excess = [&](double log_nu)
        {
            const double nu = std::exp(log_nu);
            double inv_u = 0.0;
            for (double a : gains)
                inv_u += 1.0 / phi_inverse(a * nu);
            return t * ln2 * inv_u - 1.0;
        };

        double mean_inv_gain = 0.0;
        for (double a : gains)
            mean_inv_gain += 1.0 / a;
        mean_inv_gain /= static_cast<double>(num_groups);
        double start = phi(std::min(static_cast<double>(num_groups) * t * ln2, exponent_cap)) * mean_inv_gain;
        if (!(start > 0.0) || !std::isfinite(start))
            start = 1.0;

        // Geometric expansion by 10 in both directions until the time budget is bracketed.
        double lo = std::log(start);
        double hi = lo;
        double f_lo = time_excess(lo);
        double f_hi = f_lo;
        const double decade = std::log(10.0);
        for (int it = 0; f_lo < 0.0 && it < 700; ++it)
        {
            hi = lo;
            f_hi = f_lo;
            lo -= decade;
            f_lo = time_excess(lo);
        }
        for (int it = 0; f_hi > 0.0 && it < 700; ++it)
        {
            lo = hi;
            f_lo = f_hi;
            hi += decade;
            f_hi = time_excess(hi);
        }
        double log_nu = lo;
        if (f_lo != 0.0 && f_hi != 0.0)
        {
            const Bracket b =
                solve_bracketed(time_excess, lo, hi, f_lo, f_hi, [](double x, double y) { return std::abs(y - x) <= 1e-14; });
            log_nu = 0.5 * (b.lo + b.hi);
        }
        else if (f_hi == 0.0)
        {
            log_nu = hi;
        }
        out.nu = std::exp(log_nu);
        for (std::size_t g = 0; g < num_groups; ++g)
            out.tau[g] = tau_from_nu(gains[g], t, out.nu);
    }

    for (std::size_t g = 0; g < num_groups; ++g)
    {
        out.energy_w[g] = min_energy(gains[g], t, out.tau[g]);
        out.total += out.energy_w[g];
    }
    return out;
}

namespace
{

TimeEnergyAllocation make_allocation(const EnergyMinimum &e)
{
    TimeEnergyAllocation out;
    out.tau = e.tau;
    out.energy_w = e.energy_w;
    out.nu = e.nu;
    out.power_w.resize(e.tau.size());
    for (std::size_t g = 0; g < e.tau.size(); ++g)
        out.power_w[g] = e.energy_w[g] / e.tau[g];
    return out;
}

} // namespace

TdmaAllocation pm_resource_allocation(std::span<const double> gains, double p_t, double rel_tol)
{
    check_gains(gains, "pm_resource_allocation");
    TdmaAllocation out;
    if (gains.size() == 1)
    {
        const double hi = std::log2(1.0 + p_t * gains[0]);
        out.rate = hi;
        EnergyMinimum e;
        e.tau = {1.0};
        e.energy_w = {p_t};
        e.total = p_t;
        e.nu = phi(hi * ln2) / gains[0];
        out.allocation = make_allocation(e);
        return out;
    }

    // At the optimum every group carries rate t and satisfies
    // phi(t ln2 / tau_g) = a_g nu, with sum tau_g = 1. Each nu therefore fixes
    // u_g = phi^-1(a_g nu), t = 1 / (ln2 sum 1/u_g) and the energy
    // sum (tau_g / a_g) expm1(u_g); the energy grows with nu, so one root
    // search on log nu replaces the nested search over t.
    const std::size_t num_groups = gains.size();
    std::vector<double> u(num_groups);
    auto rate_and_energy = [&](double log_nu, double &energy)
    {
        const double nu = std::exp(log_nu);
        double inv_u = 0.0;
        for (std::size_t g = 0; g < num_groups; ++g)
        {
            u[g] = phi_inverse(gains[g] * nu);
            inv_u += 1.0 / u[g];
        }
        energy = 0.0;
        for (std::size_t g = 0; g < num_groups; ++g)
            energy += std::expm1(u[g]) / (gains[g] * u[g]);
        energy /= inv_u;
        return 1.0 / (ln2 * inv_u);
    };
    const double log_budget = std::log(p_t);
    auto excess = [&](double log_nu)
    {
        double energy = 0.0;
        rate_and_energy(log_nu, energy);
        return std::log(energy) - log_budget;
    };

    // Start from the equal-slot rate, a lower bound on the optimum.
    double inv_gain_sum = 0.0;
    for (double a : gains)
        inv_gain_sum += 1.0 / a;
    const double t0 = std::log2(1.0 + static_cast<double>(num_groups) * p_t / inv_gain_sum) /
                      static_cast<double>(num_groups);
    double start = phi(std::min(static_cast<double>(num_groups) * t0 * ln2, exponent_cap)) * inv_gain_sum /
                   static_cast<double>(num_groups);
    if (!(start > 0.0) || !std::isfinite(start))
        start = 1.0;

    const double decade = std::log(10.0);
    double lo = std::log(start);
    double f_lo = excess(lo);
    double hi = lo;
    double f_hi = f_lo;
    for (int it = 0; f_lo > 0.0 && it < 700; ++it)
    {
        hi = lo;
        f_hi = f_lo;
        lo -= decade;
        f_lo = excess(lo);
    }
    for (int it = 0; f_hi < 0.0 && it < 700; ++it)
    {
        lo = hi;
        f_lo = f_hi;
        hi += decade;
        f_hi = excess(hi);
    }
    double log_nu = lo;
    if (f_hi == 0.0)
        log_nu = hi;
    else if (f_lo != 0.0)
    {
        // Keep the budget-feasible end of the final bracket.
        log_nu = solve_bracketed(excess, lo, hi, f_lo, f_hi,
                                 [&](double x, double y) { return std::abs(y - x) <= rel_tol * std::max(1.0, std::abs(y)); })
                     .lo;
    }

    double energy = 0.0;
    const double t = rate_and_energy(log_nu, energy);
    EnergyMinimum e;
    e.nu = std::exp(log_nu);
    for (std::size_t g = 0; g < num_groups; ++g)
    {
        e.tau.push_back(t * ln2 / u[g]);
        e.energy_w.push_back(min_energy(gains[g], t, e.tau.back()));
        e.total += e.energy_w.back();
    }
    out.rate = t;
    out.allocation = make_allocation(e);
    return out;
}

TdmaAllocation equal_time_allocation(std::span<const double> gains, double p_t)
{
    check_gains(gains, "equal_time_allocation");
    const double num_groups = static_cast<double>(gains.size());
    double inv_sum = 0.0;
    for (double a : gains)
        inv_sum += 1.0 / a;
    TdmaAllocation out;
    out.rate = std::log2(1.0 + num_groups * p_t / inv_sum) / num_groups;
    auto &alloc = out.allocation;
    for (double a : gains)
    {
        alloc.tau.push_back(1.0 / num_groups);
        alloc.power_w.push_back(num_groups * p_t / (a * inv_sum));
        alloc.energy_w.push_back(p_t / (a * inv_sum));
    }
    return out;
}

TdmaAllocation tdma_allocation(std::span<const double> gains, double p_t, const SystemConfig &config)
{
    if (config.equal_time)
        return equal_time_allocation(gains, p_t);
    return pm_resource_allocation(gains, p_t, config.bisection_rel_tol);
}

std::vector<double> tdma_group_rates(std::span<const double> gains, const TimeEnergyAllocation &allocation)
{
    std::vector<double> rates(gains.size());
    for (std::size_t g = 0; g < gains.size(); ++g)
        rates[g] = allocation.tau[g] * std::log2(1.0 + allocation.energy_w[g] * gains[g] / allocation.tau[g]);
    return rates;
}

SinglePaPm single_pa_pm(double x, const Topology &topology, const SystemConfig &config)
{
    const GroupGains gains = group_gains(Placement{{x}}, topology, config);
    const double num_groups = static_cast<double>(gains.size());
    const double p_t = config.power_budget_w;
    SinglePaPm out;
    out.inv_sum = gains.inv_sum;
    for (double a : gains.a)
        out.power_w.push_back(num_groups * p_t / (a * gains.inv_sum));
    out.rate = std::log2(1.0 + num_groups * p_t / gains.inv_sum) / num_groups;
    return out;
}

namespace
{

TdmaSolution finish(TdmaSolution sol, const SystemConfig &config)
{
    TdmaAllocation alloc = tdma_allocation(sol.gains, config.power_budget_w, config);
    sol.allocation = std::move(alloc.allocation);
    sol.mmf_rate = alloc.rate;
    sol.group_rates = tdma_group_rates(sol.gains, sol.allocation);
    return sol;
}

} // namespace

TdmaSolution ps_allocation(const Topology &topology, const SystemConfig &config, std::vector<Placement> placements)
{
    if (placements.size() != topology.num_groups())
        throw std::invalid_argument("ps_allocation: need one placement per group");
    TdmaSolution sol;
    sol.protocol = TdmaProtocol::switching;
    for (std::size_t g = 0; g < placements.size(); ++g)
        sol.gains.push_back(group_gains(placements[g], topology, config).a[g]);
    sol.placements = std::move(placements);
    return finish(std::move(sol), config);
}

TdmaSolution solve_tdma_ps(const Topology &topology, const SystemConfig &config, const Placement &initial,
                           std::span<const Placement> seeds)
{
    if (!seeds.empty() && seeds.size() != topology.num_groups())
        throw std::invalid_argument("solve_tdma_ps: need one seed placement per group");
    const double p_t = config.power_budget_w;
    std::vector<Placement> placements;
    std::vector<SweepTrace> traces;
    for (std::size_t g = 0; g < topology.num_groups(); ++g)
    {
        // The slot of group g only involves its own users.
        Topology single;
        single.groups = {{}};
        for (std::size_t u : topology.groups[g])
        {
            single.groups[0].push_back(single.users.size());
            single.users.push_back(topology.users[u]);
            single.noise_w.push_back(topology.noise_w[u]);
        }
        const Placement &start = seeds.empty() ? initial : seeds[g];
        PinchingModel model(single, config, start.size());
        GainScorer scorer(model, single, [](const GroupGains &gg) { return gg.a[0]; });
        auto rate = [p_t](double a) { return std::log2(1.0 + p_t * a); };
        PlacementSweep sweep = seo_sweep(start, scorer, SweepMode::maximize, config, rate);
        placements.push_back(std::move(sweep.placement));
        traces.push_back(std::move(sweep.trace));
    }
    TdmaSolution sol = ps_allocation(topology, config, std::move(placements));
    sol.traces = std::move(traces);
    return sol;
}

TdmaSolution solve_tdma_pm(const Topology &topology, const SystemConfig &config, const Placement &initial)
{
    const double p_t = config.power_budget_w;
    PinchingModel model(topology, config, initial.size());
    GainFunction rate = [&](const GroupGains &g) { return tdma_allocation(g.a, p_t, config).rate; };
    // Bottleneck group alone with the whole frame and budget.
    GainFunction bound = [p_t](const GroupGains &g) { return std::log2(1.0 + p_t * g.min()); };

    PlacementSweep sweep;
    if (config.use_hoe)
    {
        GainScorer scorer(model, topology, rate, bound);
        sweep = hoe_sweep(initial, scorer, config);
    }
    else
    {
        GainScorer scorer(model, topology, rate);
        sweep = seo_sweep(initial, scorer, SweepMode::maximize, config);
    }

    TdmaSolution sol;
    sol.protocol = TdmaProtocol::multiplexing;
    sol.gains = group_gains(sweep.placement, topology, config).a;
    sol.placements = {std::move(sweep.placement)};
    sol.traces = {std::move(sweep.trace)};
    return finish(std::move(sol), config);
}

} // namespace pinch

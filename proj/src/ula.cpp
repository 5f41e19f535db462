// SPDX-License-Identifier: Apache-2.0
#include "pinch/ula.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pinch
{

UlaConfig UlaConfig::from_config(const SystemConfig &config)
{
    UlaConfig ula;
    ula.num_elements = static_cast<std::size_t>(config.num_antennas);
    ula.phase_levels = config.grid_points;
    return ula;
}

std::vector<Point3> UlaConfig::element_positions(const SystemConfig &config) const
{
    const double centre = 0.5 * config.waveguide_length_m;
    const double spacing = 0.5 * config.wavelength();
    std::vector<Point3> pos(num_elements);
    for (std::size_t n = 0; n < num_elements; ++n)
    {
        const double offset = static_cast<double>(n) - 0.5 * static_cast<double>(num_elements - 1);
        pos[n] = Point3{centre + offset * spacing, config.waveguide_y(), config.height_m};
    }
    return pos;
}

std::vector<double> UlaConfig::codebook() const
{
    if (phase_levels < 1)
        throw std::invalid_argument("UlaConfig: phase_levels must be >= 1");
    std::vector<double> phases(static_cast<std::size_t>(phase_levels));
    for (int l = 0; l < phase_levels; ++l)
        phases[static_cast<std::size_t>(l)] = 2.0 * std::numbers::pi * l / phase_levels;
    return phases;
}

UlaModel::UlaModel(const Topology &topology, const SystemConfig &config, const UlaConfig &ula)
    : num_elements_(ula.num_elements), num_users_(topology.num_users())
{
    if (num_elements_ == 0)
        throw std::invalid_argument("UlaModel: no elements");
    weight_ = 1.0 / std::sqrt(static_cast<double>(num_elements_));
    const double amplitude = std::sqrt(config.eta());
    const double k0 = config.free_space_wavenumber();
    const auto pos = ula.element_positions(config);
    channel_.resize(num_users_ * num_elements_);
    for (std::size_t u = 0; u < num_users_; ++u)
        for (std::size_t n = 0; n < num_elements_; ++n)
        {
            const Point3 &p = topology.users[u];
            const double d = std::hypot(pos[n].x - p.x, pos[n].y - p.y, pos[n].z - p.z);
            if (d < min_link_distance_m)
                throw std::invalid_argument("UlaModel: user " + std::to_string(u) + " coincides with an element");
            channel_[u * num_elements_ + n] = std::polar(amplitude / d, -k0 * d);
        }
}

cplx UlaModel::contribution(std::size_t element, double phase, std::size_t user) const
{
    return std::polar(weight_, phase) * channel_[user * num_elements_ + element];
}

cplx ula_effective_channel(std::span<const double> phases, const Point3 &user, const SystemConfig &config,
                           const UlaConfig &ula)
{
    if (phases.size() != ula.num_elements)
        throw std::invalid_argument("ula_effective_channel: one phase per element is required");
    Topology single;
    single.groups = {{0}};
    single.users = {user};
    single.noise_w = {1.0};
    const UlaModel model(single, config, ula);
    cplx sum{0.0, 0.0};
    for (std::size_t n = 0; n < phases.size(); ++n)
        sum += model.contribution(n, phases[n], 0);
    return sum;
}

namespace
{

SweepResult phase_sweep(const ElementModel &model, CandidateScorer &scorer, const std::vector<double> &codebook,
                        SweepMode mode, bool prune, const SystemConfig &config, ProgressFunction progress)
{
    SweepOptions options = SweepOptions::from_config(config, mode);
    options.prune = prune;
    options.sort_after_sweep = false; // elements are not interchangeable
    options.progress = std::move(progress);
    CandidateFunction cands = [&](std::span<const double>, std::size_t) { return codebook; };
    return element_sweep(std::vector<double>(model.num_elements(), 0.0), scorer, cands, options);
}

Topology group_topology(const Topology &topology, std::size_t g)
{
    Topology single;
    single.groups = {{}};
    for (std::size_t u : topology.groups[g])
    {
        single.groups[0].push_back(single.users.size());
        single.users.push_back(topology.users[u]);
        single.noise_w.push_back(topology.noise_w[u]);
    }
    return single;
}

} // namespace

SchemeSolution solve_ula(const Topology &topology, Scheme scheme, const SystemConfig &config)
{
    return solve_ula(topology, scheme, config, UlaConfig::from_config(config));
}

SchemeSolution solve_ula(const Topology &topology, Scheme scheme, const SystemConfig &config, const UlaConfig &ula)
{
    topology.validate();
    const double p_t = config.power_budget_w;
    const std::size_t num_groups = topology.num_groups();
    const std::vector<double> codebook = ula.codebook();

    SchemeSolution out;
    out.scheme = scheme;
    out.baseline = true;
    std::vector<double> gains;

    if (scheme == Scheme::tdma_ps)
    {
        // Phases are electronic, so each slot gets its own setting.
        for (std::size_t g = 0; g < num_groups; ++g)
        {
            const Topology single = group_topology(topology, g);
            const UlaModel model(single, config, ula);
            GainScorer scorer(model, single, [](const GroupGains &gg) { return gg.a[0]; });
            auto rate = [p_t](double a) { return std::log2(1.0 + p_t * a); };
            SweepResult r = phase_sweep(model, scorer, codebook, SweepMode::maximize, false, config, rate);
            gains.push_back(gains_from_cnrs(model_cnrs(model, r.values, single), single).a[0]);
            out.phases_rad.push_back(std::move(r.values));
            out.traces.push_back(TraceSummary::from(r.trace));
        }
    }
    else
    {
        const UlaModel model(topology, config, ula);
        SweepResult r;
        if (scheme == Scheme::tin)
        {
            GainScorer scorer(model, topology, [](const GroupGains &g) { return g.inv_sum; });
            auto rate = [=](double inv_sum)
            { return std::log2(1.0 + tin_sinr_from_inv_sum(inv_sum, num_groups, p_t)); };
            r = phase_sweep(model, scorer, codebook, SweepMode::minimize, false, config, rate);
        }
        else
        {
            GainFunction rate;
            bool prune = config.use_hoe;
            if (scheme == Scheme::noma)
            {
                rate = [&](const GroupGains &g) { return std::log2(1.0 + noma_power(g.a, p_t, config).sinr); };
                prune = prune && num_groups > 2;
            }
            else
            {
                rate = [&](const GroupGains &g) { return tdma_allocation(g.a, p_t, config).rate; };
            }
            GainFunction bound = [p_t](const GroupGains &g) { return noma_upper_bound(g.a, p_t); };
            GainScorer scorer(model, topology, rate, prune ? bound : GainFunction{});
            r = phase_sweep(model, scorer, codebook, SweepMode::maximize, prune, config, {});
        }
        const std::vector<double> cnr = model_cnrs(model, r.values, topology);
        gains = gains_from_cnrs(cnr, topology).a;
        out.phases_rad.push_back(std::move(r.values));
        out.traces.push_back(TraceSummary::from(r.trace));
        allocate_resources(out, gains, config);
        if (scheme == Scheme::noma)
        {
            const DecodingOrder order = decoding_order(gains);
            out.sic_feasibility_margin = sic_feasibility_margin(cnr, topology, out.power_w, order);
        }
    }
    if (scheme == Scheme::tdma_ps)
        allocate_resources(out, gains, config);
    for (const auto &t : out.traces)
        out.iterations = std::max(out.iterations, t.iterations);
    return out;
}

} // namespace pinch

// SPDX-License-Identifier: Apache-2.0
#include "pinch/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pinch
{

namespace
{

double distance(double ax, double ay, double az, const Point3 &b)
{
    const double dx = ax - b.x;
    const double dy = ay - b.y;
    const double dz = az - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

} // namespace

void Topology::validate() const
{
    if (groups.empty())
        throw std::invalid_argument("Topology: at least one group is required");
    if (noise_w.size() != users.size())
        throw std::invalid_argument("Topology: noise_w must have one entry per user");
    std::vector<int> seen(users.size(), 0);
    for (std::size_t g = 0; g < groups.size(); ++g)
    {
        if (groups[g].empty())
            throw std::invalid_argument("Topology: group " + std::to_string(g) + " is empty");
        for (std::size_t u : groups[g])
        {
            if (u >= users.size())
                throw std::invalid_argument("Topology: group " + std::to_string(g) + " references unknown user " +
                                            std::to_string(u));
            if (seen[u]++)
                throw std::invalid_argument("Topology: user " + std::to_string(u) + " belongs to several groups");
        }
    }
    for (std::size_t u = 0; u < users.size(); ++u)
    {
        if (!seen[u])
            throw std::invalid_argument("Topology: user " + std::to_string(u) + " is not assigned to a group");
        if (users[u].z != 0.0)
            throw std::invalid_argument("Topology: user " + std::to_string(u) + " is not on the ground plane");
        if (!(noise_w[u] > 0.0))
            throw std::invalid_argument("Topology: user " + std::to_string(u) + " has non-positive noise");
    }
}

void Placement::validate(const SystemConfig &config) const
{
    if (x_m.empty())
        throw std::invalid_argument("Placement: no antennas");
    const double spacing = config.min_spacing();
    for (std::size_t n = 0; n < x_m.size(); ++n)
    {
        if (!(x_m[n] >= 0.0 && x_m[n] <= config.waveguide_length_m))
            throw std::invalid_argument("Placement: antenna " + std::to_string(n) + " outside the waveguide");
        if (n > 0 && !(x_m[n] - x_m[n - 1] >= spacing))
            throw std::invalid_argument("Placement: antennas " + std::to_string(n - 1) + " and " +
                                        std::to_string(n) + " violate the ordering or minimum spacing");
    }
}

bool Placement::is_valid(const SystemConfig &config) const
{
    try
    {
        validate(config);
        return true;
    }
    catch (const std::invalid_argument &)
    {
        return false;
    }
}

double GroupGains::min() const
{
    return *std::min_element(a.begin(), a.end());
}

std::vector<cplx> in_waveguide_phase(const Placement &placement, const SystemConfig &config)
{
    const double amp = std::sqrt(1.0 / static_cast<double>(placement.size()));
    const double kg = config.guided_wavenumber();
    std::vector<cplx> psi(placement.size());
    for (std::size_t n = 0; n < placement.size(); ++n)
        psi[n] = std::polar(amp, -kg * placement.x_m[n]);
    return psi;
}

std::vector<cplx> free_space_channel(const Placement &placement, const Point3 &user, const SystemConfig &config)
{
    const double sqrt_eta = std::sqrt(config.eta());
    const double k0 = config.free_space_wavenumber();
    const double y0 = config.waveguide_y();
    std::vector<cplx> h(placement.size());
    for (std::size_t n = 0; n < placement.size(); ++n)
    {
        const double d = distance(placement.x_m[n], y0, config.height_m, user);
        if (d < min_link_distance_m)
            throw std::invalid_argument("free_space_channel: user coincides with antenna " + std::to_string(n));
        h[n] = std::polar(sqrt_eta / d, -k0 * d);
    }
    return h;
}

cplx effective_channel(const Placement &placement, const Point3 &user, const SystemConfig &config)
{
    const auto psi = in_waveguide_phase(placement, config);
    const auto h = free_space_channel(placement, user, config);
    cplx sum{0.0, 0.0};
    for (std::size_t n = 0; n < h.size(); ++n)
        sum += h[n] * psi[n];
    return sum;
}

std::vector<double> user_cnrs(const Placement &placement, const Topology &topology, const SystemConfig &config)
{
    std::vector<double> cnr(topology.num_users());
    for (std::size_t u = 0; u < cnr.size(); ++u)
        cnr[u] = std::norm(effective_channel(placement, topology.users[u], config)) / topology.noise_w[u];
    return cnr;
}

GroupGains gains_from_cnrs(std::span<const double> cnr, const Topology &topology)
{
    GroupGains gains;
    gains.a.resize(topology.num_groups());
    gains.bottleneck_user.resize(topology.num_groups());
    for (std::size_t g = 0; g < topology.num_groups(); ++g)
    {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = topology.groups[g].front();
        for (std::size_t u : topology.groups[g])
        {
            if (cnr[u] < best)
            {
                best = cnr[u];
                arg = u;
            }
        }
        gains.a[g] = best;
        gains.bottleneck_user[g] = arg;
        gains.inv_sum += 1.0 / best;
    }
    return gains;
}

GroupGains group_gains(const Placement &placement, const Topology &topology, const SystemConfig &config)
{
    const auto cnr = user_cnrs(placement, topology, config);
    return gains_from_cnrs(cnr, topology);
}

std::vector<double> model_cnrs(const ElementModel &model, std::span<const double> values, const Topology &topology)
{
    if (values.size() != model.num_elements())
        throw std::invalid_argument("model_cnrs: value count does not match the element count");
    std::vector<double> cnr(topology.num_users());
    for (std::size_t u = 0; u < cnr.size(); ++u)
    {
        cplx sum{0.0, 0.0};
        for (std::size_t n = 0; n < values.size(); ++n)
            sum += model.contribution(n, values[n], u);
        cnr[u] = std::norm(sum) / topology.noise_w[u];
    }
    return cnr;
}

PinchingModel::PinchingModel(const Topology &topology, const SystemConfig &config, std::size_t num_elements)
    : num_elements_(num_elements),
      amplitude_(std::sqrt(config.eta() / static_cast<double>(num_elements))),
      k0_(config.free_space_wavenumber()),
      kg_(config.guided_wavenumber())
{
    if (num_elements == 0)
        throw std::invalid_argument("PinchingModel: no antennas");
    const double y0 = config.waveguide_y();
    user_x_.reserve(topology.num_users());
    lateral_sq_.reserve(topology.num_users());
    for (std::size_t u = 0; u < topology.num_users(); ++u)
    {
        const Point3 &p = topology.users[u];
        const double dy = y0 - p.y;
        const double dz = config.height_m - p.z;
        const double lateral = dy * dy + dz * dz;
        // Every antenna position shares this lateral offset, so checking it once
        // rules out degenerate links for the whole aperture.
        if (std::sqrt(lateral) < min_link_distance_m)
            throw std::invalid_argument("PinchingModel: user " + std::to_string(u) + " lies on the waveguide");
        user_x_.push_back(p.x);
        lateral_sq_.push_back(lateral);
    }
}

cplx PinchingModel::contribution(std::size_t, double x, std::size_t user) const
{
    const double dx = x - user_x_[user];
    const double d = std::sqrt(dx * dx + lateral_sq_[user]);
    return std::polar(amplitude_ / d, -(k0_ * d + kg_ * x));
}

} // namespace pinch

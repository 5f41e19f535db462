// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pinch/config.hpp"
#include "pinch/geometry.hpp"
#include "pinch/solution.hpp"

namespace pinch
{

/// Fixed half-wavelength array centred on the waveguide, one RF chain with a
/// quantized phase shifter per element.
struct UlaConfig
{
    std::size_t num_elements = 10;
    int phase_levels = 200;

    /// num_elements and phase_levels taken from num_antennas and grid_points.
    static UlaConfig from_config(const SystemConfig &config);

    std::vector<Point3> element_positions(const SystemConfig &config) const;
    /// Phase codebook {2 pi l / L : l = 0..L-1}.
    std::vector<double> codebook() const;
};

class UlaModel final : public ElementModel
{
public:
    UlaModel(const Topology &topology, const SystemConfig &config, const UlaConfig &ula);

    std::size_t num_elements() const override { return num_elements_; }
    std::size_t num_users() const override { return num_users_; }
    cplx contribution(std::size_t element, double phase, std::size_t user) const override;

    /// Free-space channel from element n to a user, without the phase shifter.
    cplx element_channel(std::size_t element, std::size_t user) const { return channel_[user * num_elements_ + element]; }

private:
    std::size_t num_elements_;
    std::size_t num_users_;
    double weight_;
    std::vector<cplx> channel_; // user-major
};

/// sum_n (1/sqrt(N)) e^{j theta_n} h_n for one user.
cplx ula_effective_channel(std::span<const double> phases, const Point3 &user, const SystemConfig &config,
                           const UlaConfig &ula);

/// Phase search with the scheme's own objective and allocator; tagged baseline.
SchemeSolution solve_ula(const Topology &topology, Scheme scheme, const SystemConfig &config);
SchemeSolution solve_ula(const Topology &topology, Scheme scheme, const SystemConfig &config, const UlaConfig &ula);

} // namespace pinch

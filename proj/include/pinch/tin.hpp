// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "pinch/config.hpp"
#include "pinch/geometry.hpp"
#include "pinch/seo.hpp"

namespace pinch
{

struct TinPower
{
    double sinr = 0.0; // equalized SINR
    std::vector<double> power_w;
};

/// Closed-form max-min power split when every group treats the others as noise.
TinPower tin_power(std::span<const double> gains, double p_t);

/// Equalized SINR as a function of f_A = sum_g 1/a_g.
double tin_sinr_from_inv_sum(double inv_sum, std::size_t num_groups, double p_t);

/// Per-group SINR P_g a_g / (a_g sum_{j != g} P_j + 1).
std::vector<double> tin_group_sinrs(std::span<const double> gains, std::span<const double> power_w);

/// Interference-limited rate ceiling log2(1 + 1/(G-1)); G < 2 is rejected.
double tin_ceiling(std::size_t num_groups);

/// f_A of a placement, the quantity the TIN placement search minimizes.
double tin_placement_objective(const Placement &placement, const Topology &topology, const SystemConfig &config);

struct TinSolution
{
    double equalized_sinr = 0.0;
    std::vector<double> power_w;
    std::vector<double> group_rates;
    Placement placement;
    GroupGains gains;
    double mmf_rate = 0.0;
    double ceiling_rate = 0.0; // +inf for a single group
    SweepTrace trace;
};

TinSolution solve_tin(const Topology &topology, const SystemConfig &config, const Placement &initial);

} // namespace pinch

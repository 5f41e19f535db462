// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pinch/config.hpp"
#include "pinch/geometry.hpp"
#include "pinch/seo.hpp"

namespace pinch
{

/// Energy (tau / a) (2^(t/tau) - 1) needed to carry rate t in a slot of length
/// tau. +inf once t/tau exceeds the exponent cap.
double min_energy(double a, double t, double tau);

/// d min_energy / d tau = (1/a) (2^(t/tau) (1 - t ln2 / tau) - 1).
double min_energy_slope(double a, double t, double tau);

/// Slot length solving min_energy_slope(a, t, tau) + nu = 0.
double tau_from_nu(double a, double t, double nu);

/// Solution of min sum_g min_energy(a_g, t, tau_g) s.t. sum_g tau_g = 1.
struct EnergyMinimum
{
    double total = 0.0;
    double nu = 0.0;
    std::vector<double> tau;
    std::vector<double> energy_w;
};

EnergyMinimum min_total_energy(std::span<const double> gains, double t);

struct TimeEnergyAllocation
{
    std::vector<double> tau;
    std::vector<double> energy_w; // E_g = tau_g P_g
    std::vector<double> power_w;
    double nu = 0.0; // multiplier of the time constraint; 0 under equal time
};

struct TdmaAllocation
{
    double rate = 0.0;
    TimeEnergyAllocation allocation;
};

/// Max-min rate over time and energy for fixed gains: outer search on the
/// target rate, inner KKT solve of the energy minimization.
TdmaAllocation pm_resource_allocation(std::span<const double> gains, double p_t, double rel_tol = 1e-12);

/// Equal slots tau_g = 1/G with powers proportional to 1/a_g.
TdmaAllocation equal_time_allocation(std::span<const double> gains, double p_t);

/// Dispatches on config.equal_time.
TdmaAllocation tdma_allocation(std::span<const double> gains, double p_t, const SystemConfig &config);

/// tau_g log2(1 + E_g a_g / tau_g) per group.
std::vector<double> tdma_group_rates(std::span<const double> gains, const TimeEnergyAllocation &allocation);

struct SinglePaPm
{
    std::vector<double> power_w;
    double rate = 0.0;
    double inv_sum = 0.0;
};

/// Closed-form equal-time allocation for a single antenna at x.
SinglePaPm single_pa_pm(double x, const Topology &topology, const SystemConfig &config);

enum class TdmaProtocol
{
    switching,   // PS: one placement per slot
    multiplexing // PM: shared placement
};

struct TdmaSolution
{
    TdmaProtocol protocol = TdmaProtocol::multiplexing;
    std::vector<Placement> placements; // one per group for PS, one shared for PM
    std::vector<double> gains;         // bottleneck CNR of each group in its slot
    TimeEnergyAllocation allocation;
    std::vector<double> group_rates;
    double mmf_rate = 0.0;
    std::vector<SweepTrace> traces; // one per group for PS
};

/// PS resource step: allocate time and energy given one placement per group.
TdmaSolution ps_allocation(const Topology &topology, const SystemConfig &config, std::vector<Placement> placements);

/// PS: each group's placement maximizes its own bottleneck CNR, starting from
/// `initial` or from seeds[g] when given.
TdmaSolution solve_tdma_ps(const Topology &topology, const SystemConfig &config, const Placement &initial,
                           std::span<const Placement> seeds = {});

TdmaSolution solve_tdma_pm(const Topology &topology, const SystemConfig &config, const Placement &initial);

} // namespace pinch

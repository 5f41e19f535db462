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

/// Groups sorted by ascending bottleneck CNR; ties keep group-index order.
/// Position k decodes after the groups at positions < k have been cancelled.
struct DecodingOrder
{
    std::vector<std::size_t> order;  // order[k] = group decoded k-th
    std::vector<double> sorted_gains; // gains[order[k]]
};

DecodingOrder decoding_order(std::span<const double> gains);

struct TwoGroupPower
{
    double strong_w = 0.0;
    double weak_w = 0.0;
    double sinr = 0.0;
};

/// Closed-form two-group split; requires a_strong >= a_weak > 0.
TwoGroupPower two_group_power(double a_strong, double a_weak, double p_t);

struct RecursivePower
{
    std::vector<double> power_w; // indexed by decoding position
    double total = 0.0;
};

/// Minimum powers reaching SINR `sinr` for every group, built from the
/// strongest group down. Gains must be in ascending decoding order.
RecursivePower recursive_power(std::span<const double> sorted_gains, double sinr);

/// Closed-form total of recursive_power: sum_g sinr (1+sinr)^(g-1) / a_(g).
double single_pa_required_power(std::span<const double> sorted_gains, double sinr);

struct NomaPower
{
    double sinr = 0.0;
    std::vector<double> power_w; // indexed by group
    DecodingOrder order;
    int iterations = 0;
};

/// Largest equalized SINR whose recursive power fits the budget, by bisection
/// over [0, p_t * min_g a_g].
NomaPower noma_mmf_bisection(std::span<const double> gains, double p_t, double rel_tol = 1e-12,
                             int max_iters = 200);

/// Optimal NOMA power for any G: closed form for one and two groups, bisection otherwise.
NomaPower noma_power(std::span<const double> gains, double p_t, const SystemConfig &config);

/// Rate of the bottleneck group given the whole budget: log2(1 + p_t min_g a_g).
double noma_upper_bound(std::span<const double> gains, double p_t);

/// Self-decoding SINR of each group's bottleneck user after cancelling weaker groups.
std::vector<double> noma_group_sinrs(std::span<const double> gains, std::span<const double> power_w,
                                     const DecodingOrder &order);

/// Smallest gap between any stronger-group user's SINR when decoding a weaker
/// group's message and that weaker group's own bottleneck SINR. +inf for G = 1.
double sic_feasibility_margin(std::span<const double> user_cnr, const Topology &topology,
                              std::span<const double> power_w, const DecodingOrder &order);

enum class SnrRegime
{
    low,
    high
};

/// Single-antenna placement score approximating the equalized SINR:
/// low -> p_t / f_A(x), high -> min_g (p_t a_(g)(x))^(1/g).
double single_pa_asymptotic_objective(double x, const Topology &topology, const SystemConfig &config,
                                      SnrRegime regime);

struct NomaSolution
{
    double equalized_sinr = 0.0;
    std::vector<double> power_w;
    std::vector<double> group_rates;
    DecodingOrder order;
    Placement placement;
    GroupGains gains;
    double mmf_rate = 0.0;
    double sic_feasibility_margin = 0.0;
    SweepTrace trace;
};

NomaSolution solve_noma(const Topology &topology, const SystemConfig &config, const Placement &initial);

} // namespace pinch

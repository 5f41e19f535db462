// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pinch/config.hpp"
#include "pinch/geometry.hpp"
#include "pinch/noma.hpp"
#include "pinch/seo.hpp"
#include "pinch/tdma.hpp"
#include "pinch/tin.hpp"

namespace pinch
{

enum class Scheme
{
    tin,
    noma,
    tdma_ps,
    tdma_pm
};

/// Accepts "tin", "noma", "tdma-ps", "tdma-pm" (underscores also accepted).
Scheme parse_scheme(std::string_view name);
std::string_view to_string(Scheme scheme);
std::vector<Scheme> all_schemes();

struct TraceSummary
{
    int iterations = 0;
    bool converged = false;
    std::size_t stage2_evaluations = 0;
    std::size_t total_candidates = 0;
    std::vector<double> objective;
    std::vector<double> progress;

    static TraceSummary from(const SweepTrace &trace);
    double retention_ratio() const;
};

/// Scheme-independent result record.
struct SchemeSolution
{
    Scheme scheme = Scheme::tin;
    bool baseline = false;
    /// Antenna positions: one shared placement, or one per group for TDMA-PS.
    /// Empty for the fixed-array baseline.
    std::vector<Placement> placements;
    /// Phase settings of the fixed array, arranged like placements.
    std::vector<std::vector<double>> phases_rad;
    std::vector<double> gains;
    std::vector<double> power_w;
    std::vector<double> tau; // empty for the simultaneous schemes
    std::vector<double> group_rates;
    std::vector<std::size_t> decoding_order; // NOMA only
    double sic_feasibility_margin = std::numeric_limits<double>::quiet_NaN();
    double mmf_rate = 0.0;
    int iterations = 0;
    std::vector<TraceSummary> traces;
};

SchemeSolution to_scheme_solution(const TinSolution &tin);
SchemeSolution to_scheme_solution(const NomaSolution &noma);
SchemeSolution to_scheme_solution(const TdmaSolution &tdma);

/// Power (and time) allocation of `scheme` for fixed bottleneck gains, one per
/// group. Fills gains, power_w, tau, group_rates, decoding_order and mmf_rate.
void allocate_resources(SchemeSolution &solution, std::span<const double> gains, const SystemConfig &config);

/// Pinching-antenna solver for `scheme` starting from `initial`.
SchemeSolution solve_scheme(Scheme scheme, const Topology &topology, const SystemConfig &config,
                            const Placement &initial);

} // namespace pinch

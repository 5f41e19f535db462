// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "pinch/config.hpp"
#include "pinch/geometry.hpp"
#include "pinch/rng.hpp"

namespace pinch
{

/// Raised when an element has no admissible candidate position.
class InfeasibleError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// L uniformly spaced positions {0, D/(L-1), ..., D}.
struct CandidateGrid
{
    std::vector<double> points;

    static CandidateGrid uniform(double length_m, int num_points);
    static CandidateGrid from_config(const SystemConfig &config);
    double spacing() const;
};

enum class SweepMode
{
    maximize,
    minimize
};

struct SweepTrace
{
    std::vector<double> objective; // entry 0 is the initial value, then one per sweep
    std::vector<double> progress;  // convergence metric for the same entries
    std::vector<double> accepted;  // chosen value of each element update, in update order
    std::size_t stage2_evaluations = 0;
    std::size_t total_candidates = 0;
    int iterations = 0;
    bool converged = false;

    /// Fraction of candidates that reached exact evaluation.
    double retention_ratio() const;
};

/// Objective seen by the element-wise search. bind() freezes every element
/// but one; exact() and bound() then score values for the free element.
/// Both must be safe to call concurrently after bind().
class CandidateScorer
{
public:
    virtual ~CandidateScorer() = default;
    virtual void bind(std::span<const double> values, std::size_t element) = 0;
    virtual double exact(double value) const = 0;
    /// Upper bound on exact(value); used only by the pruned search.
    virtual double bound(double) const { return std::numeric_limits<double>::infinity(); }
};

using GainFunction = std::function<double(const GroupGains &)>;
using PlacementFunction = std::function<double(const Placement &)>;
using ProgressFunction = std::function<double(double)>;

/// Scores candidates from bottleneck gains using the fixed-part plus
/// moving-element decomposition of each user's channel: O(K) per candidate.
class GainScorer final : public CandidateScorer
{
public:
    GainScorer(const ElementModel &model, const Topology &topology, GainFunction exact, GainFunction bound = {});

    void bind(std::span<const double> values, std::size_t element) override;
    double exact(double value) const override;
    double bound(double value) const override;

    GroupGains gains_at(double value) const;

private:
    const ElementModel &model_;
    const Topology &topology_;
    GainFunction exact_;
    GainFunction bound_;
    std::size_t element_ = 0;
    std::vector<cplx> fixed_;
};

/// Scores candidates by evaluating a function of the whole (sorted) placement.
class PlacementScorer final : public CandidateScorer
{
public:
    explicit PlacementScorer(PlacementFunction exact, PlacementFunction bound = {});

    void bind(std::span<const double> values, std::size_t element) override;
    double exact(double value) const override;
    double bound(double value) const override;

private:
    Placement with(double value) const;

    PlacementFunction exact_;
    PlacementFunction bound_;
    std::vector<double> values_;
    std::size_t element_ = 0;
};

using CandidateFunction = std::function<std::vector<double>(std::span<const double> values, std::size_t element)>;

struct SweepOptions
{
    SweepMode mode = SweepMode::maximize;
    bool prune = false; // two-stage bound screening, maximize only
    bool sort_after_sweep = true;
    double tol = 1e-4;
    int max_iters = 20;
    Execution execution = Execution::parallel;
    ProgressFunction progress; // identity when empty

    static SweepOptions from_config(const SystemConfig &config, SweepMode mode);
};

struct SweepResult
{
    std::vector<double> values;
    double objective = 0.0;
    SweepTrace trace;
};

/// Cyclic coordinate search. Each element moves to its best candidate only on
/// strict improvement; among equally best candidates the smallest value wins.
SweepResult element_sweep(std::vector<double> initial, CandidateScorer &scorer, const CandidateFunction &candidates,
                          const SweepOptions &options);

/// Scores every candidate with the bound scorer. Serial and OpenMP kernels
/// produce identical output.
void score_candidates(const CandidateScorer &scorer, std::span<const double> candidates, std::span<double> out,
                      Execution execution);

/// Grid points keeping at least min_spacing from every antenna except n.
std::vector<double> feasible_candidates(const CandidateGrid &grid, const Placement &placement, std::size_t n,
                                        const SystemConfig &config);

struct PlacementSweep
{
    Placement placement;
    double objective = 0.0;
    SweepTrace trace;
};

PlacementSweep seo_sweep(const Placement &initial, CandidateScorer &scorer, SweepMode mode,
                         const SystemConfig &config, const ProgressFunction &progress = {});
PlacementSweep seo_sweep(const Placement &initial, const PlacementFunction &objective, SweepMode mode,
                         const SystemConfig &config, const ProgressFunction &progress = {});

/// Maximizing search that skips exact evaluation when scorer.bound() cannot
/// beat the best value found so far. Returns the same placement as seo_sweep.
PlacementSweep hoe_sweep(const Placement &initial, CandidateScorer &scorer, const SystemConfig &config,
                         const ProgressFunction &progress = {});
PlacementSweep hoe_sweep(const Placement &initial, const PlacementFunction &upper_bound,
                         const PlacementFunction &exact, const SystemConfig &config,
                         const ProgressFunction &progress = {});

/// N distinct grid points drawn uniformly, redrawn until spacing holds, with an
/// evenly spaced fallback.
Placement random_placement(const CandidateGrid &grid, std::size_t num_antennas, const SystemConfig &config,
                           Rng &rng);

} // namespace pinch

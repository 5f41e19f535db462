// SPDX-License-Identifier: Apache-2.0
#include "pinch/seo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

namespace pinch
{

CandidateGrid CandidateGrid::uniform(double length_m, int num_points)
{
    if (num_points < 2)
        throw std::invalid_argument("CandidateGrid: at least two points are required");
    CandidateGrid grid;
    grid.points.resize(static_cast<std::size_t>(num_points));
    const double step = length_m / static_cast<double>(num_points - 1);
    for (int i = 0; i < num_points; ++i)
        grid.points[static_cast<std::size_t>(i)] = step * i;
    grid.points.back() = length_m;
    return grid;
}

CandidateGrid CandidateGrid::from_config(const SystemConfig &config)
{
    return uniform(config.waveguide_length_m, config.grid_points);
}

double CandidateGrid::spacing() const
{
    return points.back() / static_cast<double>(points.size() - 1);
}

double SweepTrace::retention_ratio() const
{
    if (total_candidates == 0)
        return 0.0;
    return static_cast<double>(stage2_evaluations) / static_cast<double>(total_candidates);
}

GainScorer::GainScorer(const ElementModel &model, const Topology &topology, GainFunction exact, GainFunction bound)
    : model_(model), topology_(topology), exact_(std::move(exact)), bound_(std::move(bound)),
      fixed_(model.num_users())
{
}

void GainScorer::bind(std::span<const double> values, std::size_t element)
{
    element_ = element;
    for (std::size_t u = 0; u < fixed_.size(); ++u)
    {
        cplx sum{0.0, 0.0};
        for (std::size_t m = 0; m < values.size(); ++m)
            if (m != element)
                sum += model_.contribution(m, values[m], u);
        fixed_[u] = sum;
    }
}

GroupGains GainScorer::gains_at(double value) const
{
    GroupGains gains;
    const std::size_t num_groups = topology_.num_groups();
    gains.a.resize(num_groups);
    gains.bottleneck_user.resize(num_groups);
    for (std::size_t g = 0; g < num_groups; ++g)
    {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = topology_.groups[g].front();
        for (std::size_t u : topology_.groups[g])
        {
            const double cnr = std::norm(fixed_[u] + model_.contribution(element_, value, u)) / topology_.noise_w[u];
            if (cnr < best)
            {
                best = cnr;
                arg = u;
            }
        }
        gains.a[g] = best;
        gains.bottleneck_user[g] = arg;
        gains.inv_sum += 1.0 / best;
    }
    return gains;
}

double GainScorer::exact(double value) const
{
    return exact_(gains_at(value));
}

double GainScorer::bound(double value) const
{
    if (!bound_)
        return std::numeric_limits<double>::infinity();
    return bound_(gains_at(value));
}

PlacementScorer::PlacementScorer(PlacementFunction exact, PlacementFunction bound)
    : exact_(std::move(exact)), bound_(std::move(bound))
{
}

void PlacementScorer::bind(std::span<const double> values, std::size_t element)
{
    values_.assign(values.begin(), values.end());
    element_ = element;
}

Placement PlacementScorer::with(double value) const
{
    Placement p{values_};
    p.x_m[element_] = value;
    std::sort(p.x_m.begin(), p.x_m.end());
    return p;
}

double PlacementScorer::exact(double value) const
{
    return exact_(with(value));
}

double PlacementScorer::bound(double value) const
{
    if (!bound_)
        return std::numeric_limits<double>::infinity();
    return bound_(with(value));
}

SweepOptions SweepOptions::from_config(const SystemConfig &config, SweepMode mode)
{
    SweepOptions options;
    options.mode = mode;
    options.tol = config.tol;
    options.max_iters = config.max_outer_iters;
    options.execution = config.execution;
    return options;
}

void score_candidates(const CandidateScorer &scorer, std::span<const double> candidates, std::span<double> out,
                      Execution execution)
{
    const auto count = static_cast<std::ptrdiff_t>(candidates.size());
    if (execution == Execution::serial)
    {
        for (std::ptrdiff_t i = 0; i < count; ++i)
            out[i] = scorer.exact(candidates[i]);
        return;
    }

    std::exception_ptr error;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i)
    {
        try
        {
            out[i] = scorer.exact(candidates[i]);
        }
        catch (...)
        {
#pragma omp critical(pinch_score_error)
            if (!error)
                error = std::current_exception();
        }
    }
    if (error)
        std::rethrow_exception(error);
}

namespace
{

struct Choice
{
    double key;
    double value;
    bool incumbent;
};

// A candidate displaces the current choice when strictly better, or equally
// good at a smaller value unless the current choice is the incumbent.
bool displaces(double key, double value, const Choice &best)
{
    if (key > best.key)
        return true;
    return key == best.key && !best.incumbent && value < best.value;
}

} // namespace

SweepResult element_sweep(std::vector<double> initial, CandidateScorer &scorer, const CandidateFunction &candidates,
                          const SweepOptions &options)
{
    if (initial.empty())
        throw std::invalid_argument("element_sweep: no elements");
    if (options.prune && options.mode != SweepMode::maximize)
        throw std::invalid_argument("element_sweep: bound pruning requires maximize mode");

    const double sign = options.mode == SweepMode::maximize ? 1.0 : -1.0;
    auto progress = [&](double f) { return options.progress ? options.progress(f) : f; };

    std::vector<double> values = std::move(initial);
    auto evaluate_current = [&]()
    {
        scorer.bind(values, 0);
        return scorer.exact(values[0]);
    };

    SweepResult result;
    SweepTrace &trace = result.trace;
    double current = evaluate_current();
    trace.objective.push_back(current);
    trace.progress.push_back(progress(current));

    std::vector<double> scores;
    for (int iter = 1; iter <= options.max_iters; ++iter)
    {
        for (std::size_t n = 0; n < values.size(); ++n)
        {
            std::vector<double> cands = candidates(values, n);
            if (cands.empty())
                throw InfeasibleError("element_sweep: element " + std::to_string(n) + " has no feasible candidate");
            std::sort(cands.begin(), cands.end());
            cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
            const double incumbent = values[n];
            if (!std::binary_search(cands.begin(), cands.end(), incumbent))
                cands.insert(std::lower_bound(cands.begin(), cands.end(), incumbent), incumbent);

            scorer.bind(values, n);
            trace.total_candidates += cands.size();

            Choice best{sign * scorer.exact(incumbent), incumbent, true};
            if (!options.prune)
            {
                scores.resize(cands.size());
                score_candidates(scorer, cands, scores, options.execution);
                trace.stage2_evaluations += cands.size();
                for (std::size_t i = 0; i < cands.size(); ++i)
                    if (cands[i] != incumbent && displaces(sign * scores[i], cands[i], best))
                        best = Choice{sign * scores[i], cands[i], false};
            }
            else
            {
                ++trace.stage2_evaluations; // incumbent
                for (double x : cands)
                {
                    if (x == incumbent)
                        continue;
                    // Stage I: a bound that cannot displace the current choice
                    // proves the exact value cannot either.
                    if (!displaces(scorer.bound(x), x, best))
                        continue;
                    ++trace.stage2_evaluations;
                    const double e = scorer.exact(x);
                    if (displaces(e, x, best))
                        best = Choice{e, x, false};
                }
            }
            values[n] = best.value;
            trace.accepted.push_back(best.value);
        }
        if (options.sort_after_sweep)
            std::sort(values.begin(), values.end());

        const double previous = current;
        current = evaluate_current();
        trace.objective.push_back(current);
        trace.progress.push_back(progress(current));
        trace.iterations = iter;
        if (std::abs(progress(current) - progress(previous)) <= options.tol)
        {
            trace.converged = true;
            break;
        }
    }

    result.values = std::move(values);
    result.objective = current;
    return result;
}

std::vector<double> feasible_candidates(const CandidateGrid &grid, const Placement &placement, std::size_t n,
                                        const SystemConfig &config)
{
    if (n >= placement.size())
        throw std::out_of_range("feasible_candidates: antenna index out of range");
    const double spacing = config.min_spacing();
    std::vector<double> out;
    out.reserve(grid.points.size());
    for (double x : grid.points)
    {
        bool ok = true;
        for (std::size_t j = 0; j < placement.size() && ok; ++j)
            if (j != n && std::abs(x - placement.x_m[j]) < spacing)
                ok = false;
        if (ok)
            out.push_back(x);
    }
    if (out.empty())
        throw InfeasibleError("feasible_candidates: no grid point satisfies the spacing rule for antenna " +
                              std::to_string(n));
    return out;
}

namespace
{

PlacementSweep run_placement_sweep(const Placement &initial, CandidateScorer &scorer, SweepOptions options,
                                   const SystemConfig &config)
{
    initial.validate(config);
    const CandidateGrid grid = CandidateGrid::from_config(config);
    CandidateFunction cands = [&](std::span<const double> values, std::size_t n)
    {
        Placement p{std::vector<double>(values.begin(), values.end())};
        return feasible_candidates(grid, p, n, config);
    };
    options.sort_after_sweep = true;
    SweepResult r = element_sweep(initial.x_m, scorer, cands, options);
    return PlacementSweep{Placement{std::move(r.values)}, r.objective, std::move(r.trace)};
}

} // namespace

PlacementSweep seo_sweep(const Placement &initial, CandidateScorer &scorer, SweepMode mode,
                         const SystemConfig &config, const ProgressFunction &progress)
{
    SweepOptions options = SweepOptions::from_config(config, mode);
    options.progress = progress;
    return run_placement_sweep(initial, scorer, options, config);
}

PlacementSweep seo_sweep(const Placement &initial, const PlacementFunction &objective, SweepMode mode,
                         const SystemConfig &config, const ProgressFunction &progress)
{
    PlacementScorer scorer(objective);
    return seo_sweep(initial, scorer, mode, config, progress);
}

PlacementSweep hoe_sweep(const Placement &initial, CandidateScorer &scorer, const SystemConfig &config,
                         const ProgressFunction &progress)
{
    SweepOptions options = SweepOptions::from_config(config, SweepMode::maximize);
    options.prune = true;
    options.progress = progress;
    return run_placement_sweep(initial, scorer, options, config);
}

PlacementSweep hoe_sweep(const Placement &initial, const PlacementFunction &upper_bound,
                         const PlacementFunction &exact, const SystemConfig &config,
                         const ProgressFunction &progress)
{
    PlacementScorer scorer(exact, upper_bound);
    return hoe_sweep(initial, scorer, config, progress);
}

Placement random_placement(const CandidateGrid &grid, std::size_t num_antennas, const SystemConfig &config,
                           Rng &rng)
{
    const std::size_t size = grid.points.size();
    if (num_antennas == 0 || num_antennas > size)
        throw InfeasibleError("random_placement: cannot place " + std::to_string(num_antennas) + " antennas on " +
                              std::to_string(size) + " grid points");
    std::vector<std::size_t> index(size);
    for (std::size_t i = 0; i < size; ++i)
        index[i] = i;

    constexpr int max_draws = 100;
    for (int draw = 0; draw < max_draws; ++draw)
    {
        // Partial Fisher-Yates: the first N slots are a uniform draw without replacement.
        for (std::size_t i = 0; i < num_antennas; ++i)
        {
            const std::size_t j = i + static_cast<std::size_t>(uniform_index(rng, size - i));
            std::swap(index[i], index[j]);
        }
        Placement p;
        for (std::size_t i = 0; i < num_antennas; ++i)
            p.x_m.push_back(grid.points[index[i]]);
        std::sort(p.x_m.begin(), p.x_m.end());
        if (p.is_valid(config))
            return p;
    }

    Placement even;
    for (std::size_t i = 0; i < num_antennas; ++i)
    {
        const std::size_t k = num_antennas == 1 ? 0 : (i * (size - 1)) / (num_antennas - 1);
        even.x_m.push_back(grid.points[k]);
    }
    if (!even.is_valid(config))
        throw InfeasibleError("random_placement: the waveguide cannot hold " + std::to_string(num_antennas) +
                              " antennas at the minimum spacing");
    return even;
}

} // namespace pinch

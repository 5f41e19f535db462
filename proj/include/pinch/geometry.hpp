// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "pinch/config.hpp"

namespace pinch
{

using cplx = std::complex<double>;

struct Point3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Users partitioned into multicast groups. groups[g] lists indices into users.
struct Topology
{
    std::vector<std::vector<std::size_t>> groups;
    std::vector<Point3> users;
    std::vector<double> noise_w;

    std::size_t num_groups() const { return groups.size(); }
    std::size_t num_users() const { return users.size(); }

    /// Checks disjoint, nonempty, covering groups; ground-plane users; positive noise.
    void validate() const;
};

/// Sorted antenna x-coordinates along the waveguide.
struct Placement
{
    std::vector<double> x_m;

    std::size_t size() const { return x_m.size(); }
    /// Throws std::invalid_argument unless sorted, inside [0, D_x] and spaced by min_spacing.
    void validate(const SystemConfig &config) const;
    bool is_valid(const SystemConfig &config) const;
};

/// Bottleneck channel-to-noise ratio per group.
struct GroupGains
{
    std::vector<double> a;
    std::vector<std::size_t> bottleneck_user;
    double inv_sum = 0.0; // f_A = sum_g 1 / a_g

    std::size_t size() const { return a.size(); }
    double min() const;
};

/// Distances below this are treated as a degenerate topology.
inline constexpr double min_link_distance_m = 1e-6;

std::vector<cplx> in_waveguide_phase(const Placement &placement, const SystemConfig &config);

/// Per-antenna LoS channel to one user.
std::vector<cplx> free_space_channel(const Placement &placement, const Point3 &user, const SystemConfig &config);

/// Cascaded channel h^T psi from the feed to one user.
cplx effective_channel(const Placement &placement, const Point3 &user, const SystemConfig &config);

/// |h_u|^2 / sigma_u^2 for every user.
std::vector<double> user_cnrs(const Placement &placement, const Topology &topology, const SystemConfig &config);

GroupGains gains_from_cnrs(std::span<const double> cnr, const Topology &topology);

GroupGains group_gains(const Placement &placement, const Topology &topology, const SystemConfig &config);

/// Additive per-element channel contributions. An effective channel is the sum
/// over elements of contribution(element, value, user), where "value" is the
/// element's free parameter (a position for pinching antennas, a phase for a
/// fixed array).
class ElementModel
{
public:
    virtual ~ElementModel() = default;
    virtual std::size_t num_elements() const = 0;
    virtual std::size_t num_users() const = 0;
    virtual cplx contribution(std::size_t element, double value, std::size_t user) const = 0;
};

/// |sum_n contribution(n, values[n], u)|^2 / sigma_u^2 for every user.
std::vector<double> model_cnrs(const ElementModel &model, std::span<const double> values, const Topology &topology);

/// Pinching antennas on one waveguide with equal power split 1/N.
class PinchingModel final : public ElementModel
{
public:
    PinchingModel(const Topology &topology, const SystemConfig &config, std::size_t num_elements);

    std::size_t num_elements() const override { return num_elements_; }
    std::size_t num_users() const override { return user_x_.size(); }
    cplx contribution(std::size_t element, double x, std::size_t user) const override;

private:
    std::size_t num_elements_;
    double amplitude_;
    double k0_;
    double kg_;
    std::vector<double> user_x_;
    std::vector<double> lateral_sq_; // (y0 - y_u)^2 + (h - z_u)^2
};

} // namespace pinch

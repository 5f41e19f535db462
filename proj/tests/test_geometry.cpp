// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "pinch/geometry.hpp"
#include "pinch/rng.hpp"

using namespace pinch;

namespace
{

Topology three_groups(Rng &rng, const SystemConfig &c)
{
    Topology t;
    for (std::size_t g = 0; g < 3; ++g)
    {
        t.groups.emplace_back();
        for (int k = 0; k < 3; ++k)
        {
            t.groups.back().push_back(t.users.size());
            t.users.push_back({uniform(rng, 0.0, c.waveguide_length_m), uniform(rng, 0.0, c.region_depth_m), 0.0});
            t.noise_w.push_back(1e-12);
        }
    }
    return t;
}

} // namespace

TEST_CASE("config constants and unit conversion")
{
    SystemConfig c;
    CHECK(c.eta() == doctest::Approx(7.27e-7).epsilon(2e-3));
    CHECK(c.min_spacing() == doctest::Approx(0.5 * 299792458.0 / 28e9));
    CHECK(c.waveguide_y() == doctest::Approx(3.0));
    CHECK(dbm_to_watt(-90.0) == doctest::Approx(1e-12));
    CHECK(dbm_to_watt(30.0) == doctest::Approx(1.0));
    CHECK(watt_to_dbm(1e-4) == doctest::Approx(-10.0));

    SystemConfig bad;
    bad.grid_points = 1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = SystemConfig{};
    bad.refractive_index = 0.9;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("in-waveguide phase")
{
    SystemConfig c;
    auto psi = in_waveguide_phase(Placement{{0.0}}, c);
    CHECK(std::abs(psi[0] - cplx(1.0, 0.0)) < 1e-15);

    psi = in_waveguide_phase(Placement{{1.0, 2.3, 4.0, 7.7}}, c);
    for (auto v : psi)
        CHECK(std::abs(v) == doctest::Approx(0.5).epsilon(1e-15));

    psi = in_waveguide_phase(Placement{{c.guided_wavelength()}}, c);
    CHECK(std::abs(psi[0] - cplx(1.0, 0.0)) < 1e-12);
}

TEST_CASE("free-space channel")
{
    SystemConfig c;
    const Point3 below{4.0, c.waveguide_y(), 0.0};
    auto h = free_space_channel(Placement{{4.0}}, below, c);
    CHECK(std::abs(h[0]) == doctest::Approx(std::sqrt(c.eta()) / 5.0).epsilon(1e-14));
    CHECK(std::norm(h[0]) == doctest::Approx(2.91e-8).epsilon(3e-3));

    // 1/D law: a user at lateral distance 5 from the antenna base sits at D = sqrt(50).
    const Point3 near{4.0, c.waveguide_y() + 5.0, 0.0};
    const double d1 = std::abs(free_space_channel(Placement{{4.0}}, near, c)[0]);
    // Antenna at the same x, user at distance 2 D along the same direction from the antenna.
    const Point3 doubled{4.0, c.waveguide_y() + 10.0, -5.0};
    const double d2 = std::abs(free_space_channel(Placement{{4.0}}, doubled, c)[0]);
    CHECK(d2 == doctest::Approx(d1 / 2.0).epsilon(1e-13));

    // Distances one and two wavelengths away share the same phase.
    const double lambda = c.wavelength();
    const Point3 at1{4.0, c.waveguide_y(), c.height_m - lambda};
    const Point3 at2{4.0, c.waveguide_y(), c.height_m - 2.0 * lambda};
    const double p1 = std::arg(free_space_channel(Placement{{4.0}}, at1, c)[0]);
    const double p2 = std::arg(free_space_channel(Placement{{4.0}}, at2, c)[0]);
    CHECK(std::abs(std::remainder(p1 - p2, 2.0 * std::numbers::pi)) < 1e-9);

    const Point3 on_antenna{4.0, c.waveguide_y(), c.height_m};
    CHECK_THROWS_AS(free_space_channel(Placement{{4.0}}, on_antenna, c), std::invalid_argument);
}

TEST_CASE("effective channel")
{
    SystemConfig c;
    const Point3 u{3.0, 1.0, 0.0};
    // Single antenna: magnitude depends only on distance.
    const double d = std::sqrt(1.0 + 4.0 + 25.0);
    CHECK(std::abs(effective_channel(Placement{{2.0}}, u, c)) == doctest::Approx(std::sqrt(c.eta()) / d));
    CHECK(std::abs(effective_channel(Placement{{4.0}}, u, c)) == doctest::Approx(std::sqrt(c.eta()) / d));

    // Triangle inequality bound.
    const Placement p{{0.5, 2.0, 7.5, 11.0}};
    double bound = 0.0;
    for (auto h : free_space_channel(p, u, c))
        bound += std::abs(h) / 2.0;
    CHECK(std::abs(effective_channel(p, u, c)) <= bound * (1.0 + 1e-14));

    // Two antennas with congruent path phases add coherently. Scan the second
    // position on a fine grid for the phase match.
    const double x1 = 3.0;
    const double k0 = c.free_space_wavenumber();
    const double kg = c.guided_wavenumber();
    auto total_phase = [&](double x)
    {
        const double dd = std::sqrt((x - u.x) * (x - u.x) + 4.0 + 25.0);
        return k0 * dd + kg * x;
    };
    double best_x = x1 + 0.01;
    double best_gap = 10.0;
    for (double x = x1 + 0.006; x < x1 + 0.05; x += 1e-7)
    {
        const double gap = std::abs(std::remainder(total_phase(x) - total_phase(x1), 2.0 * std::numbers::pi));
        if (gap < best_gap)
        {
            best_gap = gap;
            best_x = x;
        }
    }
    const double d1 = std::sqrt((x1 - u.x) * (x1 - u.x) + 29.0);
    const double d2 = std::sqrt((best_x - u.x) * (best_x - u.x) + 29.0);
    const double coherent = std::sqrt(c.eta() / 2.0) * (1.0 / d1 + 1.0 / d2);
    CHECK(std::abs(effective_channel(Placement{{x1, best_x}}, u, c)) == doctest::Approx(coherent).epsilon(1e-6));
}

TEST_CASE("group gains match independent evaluation")
{
    SystemConfig c;
    Rng rng = child_stream(11, 0);
    for (int trial = 0; trial < 10; ++trial)
    {
        const Topology t = three_groups(rng, c);
        const Placement p{{1.0, 4.5, 9.0, 15.5}};
        const GroupGains g = group_gains(p, t, c);
        const auto ref = oracle::bottleneck(p.x_m, t, c);
        for (std::size_t i = 0; i < 3; ++i)
        {
            // Phases of order 1e4 rad leave about 1e-12 relative rounding per term.
            CHECK(oracle::rel_err(g.a[i], ref[i]) < 1e-9);
            CHECK(g.a[i] == doctest::Approx(user_cnrs(p, t, c)[g.bottleneck_user[i]]));
        }
        CHECK(g.inv_sum == doctest::Approx(oracle::inv_sum(g.a)).epsilon(1e-15));

        // Permuting users inside a group leaves the gains unchanged.
        Topology shuffled = t;
        std::reverse(shuffled.groups[1].begin(), shuffled.groups[1].end());
        CHECK(group_gains(p, shuffled, c).a == g.a);

        // The per-element model reproduces the direct channel.
        PinchingModel model(t, c, p.size());
        const auto cnr = model_cnrs(model, p.x_m, t);
        const auto direct = user_cnrs(p, t, c);
        for (std::size_t u = 0; u < cnr.size(); ++u)
            CHECK(oracle::rel_err(cnr[u], direct[u]) < 1e-9);
    }
}

TEST_CASE("single group gain trivia")
{
    SystemConfig c;
    Topology one{{{0}}, {{5.0, 2.0, 0.0}}, {1e-12}};
    const Placement p{{6.0}};
    CHECK(group_gains(p, one, c).a[0] == doctest::Approx(std::norm(effective_channel(p, one.users[0], c)) / 1e-12));

    Topology twins{{{0, 1}}, {{5.0, 2.0, 0.0}, {5.0, 2.0, 0.0}}, {1e-12, 1e-12}};
    const GroupGains g = group_gains(p, twins, c);
    CHECK(g.a[0] == doctest::Approx(group_gains(p, one, c).a[0]));

    // A lone antenna serves a lone user best from the nearest point.
    double best = -1.0;
    double arg = -1.0;
    for (int i = 0; i <= 200; ++i)
    {
        const double x = 0.1 * i;
        const double a = group_gains(Placement{{x}}, one, c).a[0];
        if (a > best)
        {
            best = a;
            arg = x;
        }
    }
    CHECK(arg == doctest::Approx(5.0));
}

TEST_CASE("topology and placement validation")
{
    SystemConfig c;
    Topology t{{{0}, {1}}, {{1.0, 1.0, 0.0}, {2.0, 2.0, 0.0}}, {1e-12, 1e-12}};
    CHECK_NOTHROW(t.validate());
    Topology overlap = t;
    overlap.groups = {{0, 1}, {1}};
    CHECK_THROWS_AS(overlap.validate(), std::invalid_argument);
    Topology missing = t;
    missing.groups = {{0}};
    CHECK_THROWS_AS(missing.validate(), std::invalid_argument);
    Topology lifted = t;
    lifted.users[0].z = 1.0;
    CHECK_THROWS_AS(lifted.validate(), std::invalid_argument);
    Topology silent = t;
    silent.noise_w[1] = 0.0;
    CHECK_THROWS_AS(silent.validate(), std::invalid_argument);

    CHECK(Placement{{0.0, 1.0, 20.0}}.is_valid(c));
    CHECK_FALSE(Placement{{1.0, 0.0}}.is_valid(c));
    CHECK_FALSE(Placement{{0.0, 0.001}}.is_valid(c));
    CHECK_FALSE(Placement{{-0.1}}.is_valid(c));
    CHECK_FALSE(Placement{{20.5}}.is_valid(c));
    const Placement unsorted{{1.0, 0.0}};
    CHECK_THROWS_AS(unsorted.validate(c), std::invalid_argument);
}

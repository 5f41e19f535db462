// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

namespace pinch
{

inline constexpr double speed_of_light = 299792458.0;

/// Converts a power level in dBm to linear watts.
double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

enum class Execution
{
    serial,
    parallel
};

/// Physical and algorithmic parameters shared by every solver. All powers are
/// linear watts; dBm only appears when parsing configuration files.
struct SystemConfig
{
    double waveguide_length_m = 20.0; // D_x
    double region_depth_m = 6.0;      // D_y
    double height_m = 5.0;
    std::optional<double> waveguide_y_m; // defaults to D_y / 2
    double carrier_hz = 28e9;
    double refractive_index = 1.44;
    std::optional<double> min_spacing_m; // defaults to half a free-space wavelength
    int grid_points = 200;
    double power_budget_w = 1e-4; // -10 dBm
    double noise_w = 1e-12;       // -90 dBm, used for generated topologies
    int num_antennas = 10;

    double tol = 1e-4;
    int max_outer_iters = 20;
    double bisection_rel_tol = 1e-12;
    int bisection_max_iters = 200;

    bool use_hoe = true;
    bool equal_time = false;
    Execution execution = Execution::parallel;

    double wavelength() const;
    double guided_wavelength() const;
    double free_space_wavenumber() const;
    double guided_wavenumber() const;
    /// Free-space path-loss constant c^2 / (16 pi^2 f_c^2).
    double eta() const;
    double waveguide_y() const;
    double min_spacing() const;

    /// Throws std::invalid_argument describing the first violated invariant.
    void validate() const;
};

} // namespace pinch

// SPDX-License-Identifier: Apache-2.0
#include "pinch/config.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pinch
{

double dbm_to_watt(double dbm)
{
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double watt_to_dbm(double watt)
{
    return 10.0 * std::log10(watt) + 30.0;
}

double SystemConfig::wavelength() const
{
    return speed_of_light / carrier_hz;
}

double SystemConfig::guided_wavelength() const
{
    return wavelength() / refractive_index;
}

double SystemConfig::free_space_wavenumber() const
{
    return 2.0 * std::numbers::pi / wavelength();
}

double SystemConfig::guided_wavenumber() const
{
    return 2.0 * std::numbers::pi / guided_wavelength();
}

double SystemConfig::eta() const
{
    const double r = speed_of_light / (4.0 * std::numbers::pi * carrier_hz);
    return r * r;
}

double SystemConfig::waveguide_y() const
{
    return waveguide_y_m.value_or(0.5 * region_depth_m);
}

double SystemConfig::min_spacing() const
{
    return min_spacing_m.value_or(0.5 * wavelength());
}

void SystemConfig::validate() const
{
    auto require = [](bool ok, const char *what)
    {
        if (!ok)
            throw std::invalid_argument(std::string("SystemConfig: ") + what);
    };
    require(waveguide_length_m > 0.0, "waveguide_length_m must be positive");
    require(region_depth_m >= 0.0, "region_depth_m must be non-negative");
    require(height_m > 0.0, "height_m must be positive");
    require(carrier_hz > 0.0, "carrier_hz must be positive");
    require(refractive_index >= 1.0, "refractive_index must be >= 1");
    require(grid_points >= 2, "grid_points must be >= 2");
    require(min_spacing() >= 0.0, "min_spacing_m must be non-negative");
    require(power_budget_w > 0.0, "power_budget_w must be positive");
    require(noise_w > 0.0, "noise_w must be positive");
    require(num_antennas >= 1, "num_antennas must be >= 1");
    require(tol > 0.0, "tol must be positive");
    require(max_outer_iters >= 1, "max_outer_iters must be >= 1");
    require(bisection_rel_tol > 0.0, "bisection_rel_tol must be positive");
    require(bisection_max_iters >= 1, "bisection_max_iters must be >= 1");
}

} // namespace pinch

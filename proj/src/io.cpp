// SPDX-License-Identifier: Apache-2.0
#include "pinch/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pinch
{

std::string read_text_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path.string() + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::filesystem::path &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out)
        throw std::runtime_error("write to '" + path.string() + "' failed");
}

namespace
{

json parse_file(const std::filesystem::path &path)
{
    try
    {
        return json::parse(read_text_file(path));
    }
    catch (const json::parse_error &e)
    {
        throw std::invalid_argument("'" + path.string() + "': " + e.what());
    }
}

json number(double v)
{
    if (!std::isfinite(v))
        return nullptr;
    return v;
}

json numbers(const std::vector<double> &v)
{
    json out = json::array();
    for (double x : v)
        out.push_back(number(x));
    return out;
}

} // namespace

SystemConfig config_from_json(const json &j, SystemConfig c)
{
    if (!j.is_object())
        throw std::invalid_argument("config: expected a JSON object");
    for (const auto &[key, value] : j.items())
    {
        if (key == "waveguide_length_m")
            c.waveguide_length_m = value.get<double>();
        else if (key == "region_depth_m")
            c.region_depth_m = value.get<double>();
        else if (key == "height_m")
            c.height_m = value.get<double>();
        else if (key == "waveguide_y_m")
            c.waveguide_y_m = value.is_null() ? std::nullopt : std::optional<double>(value.get<double>());
        else if (key == "carrier_hz")
            c.carrier_hz = value.get<double>();
        else if (key == "refractive_index")
            c.refractive_index = value.get<double>();
        else if (key == "min_spacing_m")
            c.min_spacing_m = value.is_null() ? std::nullopt : std::optional<double>(value.get<double>());
        else if (key == "grid_points")
            c.grid_points = value.get<int>();
        else if (key == "power_budget_w")
            c.power_budget_w = value.get<double>();
        else if (key == "power_dbm")
            c.power_budget_w = dbm_to_watt(value.get<double>());
        else if (key == "noise_w")
            c.noise_w = value.get<double>();
        else if (key == "noise_dbm")
            c.noise_w = dbm_to_watt(value.get<double>());
        else if (key == "num_antennas")
            c.num_antennas = value.get<int>();
        else if (key == "tol")
            c.tol = value.get<double>();
        else if (key == "max_outer_iters")
            c.max_outer_iters = value.get<int>();
        else if (key == "bisection_rel_tol")
            c.bisection_rel_tol = value.get<double>();
        else if (key == "bisection_max_iters")
            c.bisection_max_iters = value.get<int>();
        else if (key == "use_hoe")
            c.use_hoe = value.get<bool>();
        else if (key == "equal_time")
            c.equal_time = value.get<bool>();
        else if (key == "execution")
        {
            const auto name = value.get<std::string>();
            if (name == "serial")
                c.execution = Execution::serial;
            else if (name == "parallel")
                c.execution = Execution::parallel;
            else
                throw std::invalid_argument("config: execution must be 'serial' or 'parallel'");
        }
        else
            throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    c.validate();
    return c;
}

json config_to_json(const SystemConfig &c)
{
    json j;
    j["waveguide_length_m"] = c.waveguide_length_m;
    j["region_depth_m"] = c.region_depth_m;
    j["height_m"] = c.height_m;
    j["waveguide_y_m"] = c.waveguide_y();
    j["carrier_hz"] = c.carrier_hz;
    j["refractive_index"] = c.refractive_index;
    j["min_spacing_m"] = c.min_spacing();
    j["grid_points"] = c.grid_points;
    j["power_budget_w"] = c.power_budget_w;
    j["noise_w"] = c.noise_w;
    j["num_antennas"] = c.num_antennas;
    j["tol"] = c.tol;
    j["max_outer_iters"] = c.max_outer_iters;
    j["bisection_rel_tol"] = c.bisection_rel_tol;
    j["bisection_max_iters"] = c.bisection_max_iters;
    j["use_hoe"] = c.use_hoe;
    j["equal_time"] = c.equal_time;
    j["execution"] = c.execution == Execution::serial ? "serial" : "parallel";
    return j;
}

SystemConfig load_config(const std::filesystem::path &path)
{
    return config_from_json(parse_file(path));
}

Topology topology_from_json(const json &j)
{
    if (!j.is_object() || !j.contains("groups") || !j.contains("users"))
        throw std::invalid_argument("topology: expected an object with 'groups' and 'users'");
    Topology t;
    for (const auto &g : j.at("groups"))
        t.groups.push_back(g.get<std::vector<std::size_t>>());
    for (const auto &u : j.at("users"))
    {
        const auto xyz = u.get<std::vector<double>>();
        if (xyz.size() != 2 && xyz.size() != 3)
            throw std::invalid_argument("topology: each user needs [x, y] or [x, y, z]");
        t.users.push_back(Point3{xyz[0], xyz[1], xyz.size() == 3 ? xyz[2] : 0.0});
    }

    const bool has_w = j.contains("noise_w");
    const bool has_dbm = j.contains("noise_dbm");
    if (has_w && has_dbm)
        throw std::invalid_argument("topology: give noise_w or noise_dbm, not both");
    const json noise = has_w ? j.at("noise_w") : has_dbm ? j.at("noise_dbm") : json(-90.0);
    auto to_watt = [&](double v) { return has_w ? v : dbm_to_watt(v); };
    if (noise.is_array())
    {
        for (const auto &v : noise)
            t.noise_w.push_back(to_watt(v.get<double>()));
    }
    else
    {
        t.noise_w.assign(t.users.size(), to_watt(noise.get<double>()));
    }
    for (const auto &[key, value] : j.items())
        if (key != "groups" && key != "users" && key != "noise_w" && key != "noise_dbm")
            throw std::invalid_argument("topology: unknown key '" + key + "'");
    t.validate();
    return t;
}

json topology_to_json(const Topology &t)
{
    json j;
    j["groups"] = t.groups;
    json users = json::array();
    for (const auto &u : t.users)
        users.push_back({u.x, u.y, u.z});
    j["users"] = users;
    j["noise_w"] = t.noise_w;
    return j;
}

Topology load_topology(const std::filesystem::path &path)
{
    return topology_from_json(parse_file(path));
}

json solution_to_json(const SchemeSolution &s)
{
    json j;
    j["scheme"] = std::string(to_string(s.scheme));
    j["baseline"] = s.baseline;
    j["mmf_rate"] = number(s.mmf_rate);
    j["group_rates"] = numbers(s.group_rates);
    j["gains"] = numbers(s.gains);
    j["power_w"] = numbers(s.power_w);
    if (!s.tau.empty())
        j["tau"] = numbers(s.tau);
    if (!s.placements.empty())
    {
        json p = json::array();
        for (const auto &pl : s.placements)
            p.push_back(numbers(pl.x_m));
        j["placements_m"] = p;
    }
    if (!s.phases_rad.empty())
    {
        json p = json::array();
        for (const auto &ph : s.phases_rad)
            p.push_back(numbers(ph));
        j["phases_rad"] = p;
    }
    if (s.scheme == Scheme::noma)
    {
        j["decoding_order"] = s.decoding_order;
        j["sic_feasibility_margin"] = number(s.sic_feasibility_margin);
    }
    j["iterations"] = s.iterations;
    json traces = json::array();
    for (const auto &t : s.traces)
    {
        traces.push_back({{"iterations", t.iterations},
                          {"converged", t.converged},
                          {"stage2_evaluations", t.stage2_evaluations},
                          {"total_candidates", t.total_candidates},
                          {"retention_ratio", t.retention_ratio()},
                          {"objective", numbers(t.objective)},
                          {"progress", numbers(t.progress)}});
    }
    j["traces"] = traces;
    return j;
}

} // namespace pinch

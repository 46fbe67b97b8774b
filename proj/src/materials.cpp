// terasim: deterministic indoor terahertz radio propagation simulator
// Copyright (C) 2026 terasim contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "terasim/materials.hpp"

#include "terasim/csv.hpp"
#include "terasim/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

namespace terasim
{

namespace
{

void require(bool ok, const std::string &msg)
{
    if (!ok)
        throw ValidationError(msg);
}

void check_axis(const std::vector<double> &axis, const std::string &what, const std::string &name)
{
    require(!axis.empty(), name + ": empty " + what + " axis");
    for (size_t i = 0; i < axis.size(); ++i)
    {
        require(std::isfinite(axis[i]), name + ": non-finite " + what + " value");
        if (i > 0)
            require(axis[i] > axis[i - 1], name + ": " + what + " axis not strictly increasing");
    }
}

} // namespace

std::pair<size_t, double> bracket_axis(const std::vector<double> &axis, double q)
{
    if (axis.size() == 1 || q <= axis.front())
        return {0, 0.0};
    if (q >= axis.back())
        return {axis.size() - 2, 1.0};
    auto it = std::upper_bound(axis.begin(), axis.end(), q);
    size_t hi = static_cast<size_t>(it - axis.begin());
    size_t lo = hi - 1;
    return {lo, (q - axis[lo]) / (axis[hi] - axis[lo])};
}

void MaterialProfile::validate() const
{
    check_axis(incidence_deg, "incidence", name);
    check_axis(observation_deg, "observation", name);
    check_axis(frequency_ghz, "frequency", name);
    require(incidence_deg.front() >= 0.0 && incidence_deg.back() <= 90.0,
            name + ": incidence angles must lie in [0, 90]");
    require(observation_deg.front() >= 0.0 && observation_deg.back() <= 90.0,
            name + ": observation angles must lie in [0, 90]");
    require(frequency_ghz.front() > 0.0, name + ": frequencies must be positive");
    size_t expected = incidence_deg.size() * observation_deg.size() * frequency_ghz.size();
    require(energy.size() == expected, name + ": grid size mismatch");
    for (double e : energy)
        require(std::isfinite(e) && e >= 0.0 && e <= 1.0,
                name + ": energy fractions must lie in [0, 1]");
}

MaterialProfile load_profile_csv(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open material profile: " + path.string());
    return parse_profile_csv(in, path.filename().string());
}

MaterialProfile parse_profile_csv(std::istream &in, const std::string &name)
{
    struct Sample
    {
        double inc, obs, freq, energy;
        int row;
    };
    std::vector<Sample> samples;
    std::set<double> inc_axis, obs_axis, freq_axis;

    std::string line;
    int row = 0;
    while (std::getline(in, line))
    {
        ++row;
        if (line.empty() || line == "\r")
            continue;
        auto fields = split_csv_line(line);
        if (row == 1)
        {
            if (fields.size() != 4 || fields[0] != "incidence_deg" ||
                fields[1] != "observation_deg" || fields[2] != "frequency_ghz" ||
                fields[3] != "energy_fraction")
                throw ValidationError(
                    name +
                    ": row 1: expected header incidence_deg,observation_deg,frequency_ghz,energy_fraction");
            continue;
        }
        std::string ctx = name + ": row " + std::to_string(row);
        if (fields.size() != 4)
            throw ValidationError(ctx + ": expected 4 fields, got " + std::to_string(fields.size()));
        Sample s;
        s.inc = parse_csv_double(fields[0], ctx + " (incidence_deg)");
        s.obs = parse_csv_double(fields[1], ctx + " (observation_deg)");
        s.freq = parse_csv_double(fields[2], ctx + " (frequency_ghz)");
        s.energy = parse_csv_double(fields[3], ctx + " (energy_fraction)");
        s.row = row;
        if (!(s.energy >= 0.0 && s.energy <= 1.0))
            throw ValidationError(ctx + ": energy_fraction " + format_number(s.energy) +
                                  " outside [0, 1]");
        samples.push_back(s);
        inc_axis.insert(s.inc);
        obs_axis.insert(s.obs);
        freq_axis.insert(s.freq);
    }
    if (samples.empty())
        throw ValidationError(name + ": no data rows");

    MaterialProfile p;
    p.name = name;
    p.incidence_deg.assign(inc_axis.begin(), inc_axis.end());
    p.observation_deg.assign(obs_axis.begin(), obs_axis.end());
    p.frequency_ghz.assign(freq_axis.begin(), freq_axis.end());
    size_t cells = p.incidence_deg.size() * p.observation_deg.size() * p.frequency_ghz.size();
    p.energy.assign(cells, std::numeric_limits<double>::quiet_NaN());

    auto axis_index = [](const std::vector<double> &axis, double v) {
        return static_cast<size_t>(std::lower_bound(axis.begin(), axis.end(), v) - axis.begin());
    };
    for (const Sample &s : samples)
    {
        size_t i = axis_index(p.incidence_deg, s.inc);
        size_t o = axis_index(p.observation_deg, s.obs);
        size_t f = axis_index(p.frequency_ghz, s.freq);
        double &slot = p.at(i, o, f);
        if (!std::isnan(slot))
            throw ValidationError(name + ": row " + std::to_string(s.row) +
                                  ": duplicate grid point (" + format_number(s.inc) + ", " +
                                  format_number(s.obs) + ", " + format_number(s.freq) + ")");
        slot = s.energy;
    }
    for (size_t i = 0; i < p.incidence_deg.size(); ++i)
        for (size_t o = 0; o < p.observation_deg.size(); ++o)
            for (size_t f = 0; f < p.frequency_ghz.size(); ++f)
                if (std::isnan(p.at(i, o, f)))
                    throw ValidationError(name + ": incomplete grid, missing point (" +
                                          format_number(p.incidence_deg[i]) + ", " +
                                          format_number(p.observation_deg[o]) + ", " +
                                          format_number(p.frequency_ghz[f]) + ")");
    p.validate();
    return p;
}

MaterialProfile parametric_profile(const std::string &name, std::span<const ParametricLobe> lobes,
                                   double angle_step_deg)
{
    require(!lobes.empty(), name + ": parametric profile needs at least one frequency anchor");
    require(angle_step_deg > 0.0 && angle_step_deg <= 90.0,
            name + ": angle step must lie in (0, 90]");
    std::vector<ParametricLobe> sorted(lobes.begin(), lobes.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const ParametricLobe &a, const ParametricLobe &b) {
                  return a.frequency_ghz < b.frequency_ghz;
              });
    for (size_t i = 0; i < sorted.size(); ++i)
    {
        const ParametricLobe &l = sorted[i];
        require(l.frequency_ghz > 0.0, name + ": anchor frequency must be positive");
        require(l.specular_amplitude >= 0.0 && l.lobe_width_deg > 0.0 && l.diffuse_floor >= 0.0,
                name + ": anchor parameters out of range");
        require(l.specular_amplitude + l.diffuse_floor <= 1.0,
                name + ": anchor reflects more energy than incident");
        if (i > 0)
            require(l.frequency_ghz > sorted[i - 1].frequency_ghz,
                    name + ": duplicate anchor frequency");
    }

    MaterialProfile p;
    p.name = name;
    int steps = static_cast<int>(std::ceil(90.0 / angle_step_deg - 1e-9));
    for (int i = 0; i <= steps; ++i)
        p.incidence_deg.push_back(std::min(90.0, angle_step_deg * static_cast<double>(i)));
    p.observation_deg = p.incidence_deg;
    for (const ParametricLobe &l : sorted)
        p.frequency_ghz.push_back(l.frequency_ghz);

    p.energy.resize(p.incidence_deg.size() * p.observation_deg.size() * p.frequency_ghz.size());
    for (size_t i = 0; i < p.incidence_deg.size(); ++i)
        for (size_t o = 0; o < p.observation_deg.size(); ++o)
            for (size_t f = 0; f < p.frequency_ghz.size(); ++f)
            {
                const ParametricLobe &l = sorted[f];
                double dev = (p.observation_deg[o] - p.incidence_deg[i]) / l.lobe_width_deg;
                double e = l.specular_amplitude * std::exp(-dev * dev) + l.diffuse_floor;
                p.at(i, o, f) = std::min(e, 1.0);
            }
    p.validate();
    return p;
}

double energy_fraction(const MaterialProfile &profile, double incidence_deg,
                       double observation_deg, double frequency_ghz)
{
    if (frequency_ghz < profile.min_frequency_ghz() || frequency_ghz > profile.max_frequency_ghz())
        throw ValidationError(profile.name + ": frequency " + format_number(frequency_ghz) +
                              " GHz outside profile span [" +
                              format_number(profile.min_frequency_ghz()) + ", " +
                              format_number(profile.max_frequency_ghz()) + "]");
    auto [i0, ti] = bracket_axis(profile.incidence_deg, incidence_deg);
    auto [o0, to] = bracket_axis(profile.observation_deg, observation_deg);
    auto [f0, tf] = bracket_axis(profile.frequency_ghz, frequency_ghz);
    size_t i1 = std::min(i0 + 1, profile.incidence_deg.size() - 1);
    size_t o1 = std::min(o0 + 1, profile.observation_deg.size() - 1);
    size_t f1 = std::min(f0 + 1, profile.frequency_ghz.size() - 1);

    auto lerp = [](double a, double b, double t) { return a + (b - a) * t; };
    double c00 = lerp(profile.at(i0, o0, f0), profile.at(i0, o0, f1), tf);
    double c01 = lerp(profile.at(i0, o1, f0), profile.at(i0, o1, f1), tf);
    double c10 = lerp(profile.at(i1, o0, f0), profile.at(i1, o0, f1), tf);
    double c11 = lerp(profile.at(i1, o1, f0), profile.at(i1, o1, f1), tf);
    double c0 = lerp(c00, c01, to);
    double c1 = lerp(c10, c11, to);
    return lerp(c0, c1, ti);
}

void write_profile_csv(const MaterialProfile &profile, std::ostream &out)
{
    out << "incidence_deg,observation_deg,frequency_ghz,energy_fraction\n";
    for (size_t i = 0; i < profile.incidence_deg.size(); ++i)
        for (size_t o = 0; o < profile.observation_deg.size(); ++o)
            for (size_t f = 0; f < profile.frequency_ghz.size(); ++f)
                out << format_number(profile.incidence_deg[i]) << ','
                    << format_number(profile.observation_deg[o]) << ','
                    << format_number(profile.frequency_ghz[f]) << ','
                    << format_number(profile.at(i, o, f)) << '\n';
}

MaterialLibrary MaterialLibrary::load_defaults(const std::filesystem::path &json_path)
{
    std::ifstream in(json_path);
    if (!in)
        throw IoError("cannot open material defaults: " + json_path.string());
    nlohmann::json doc;
    try
    {
        in >> doc;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ValidationError(json_path.string() + ": " + e.what());
    }

    MaterialLibrary lib;
    try
    {
        double angle_step = doc.value("angle_step_deg", 1.5);
        for (const auto &[mat_name, entry] : doc.at("materials").items())
        {
            std::vector<ParametricLobe> lobes;
            for (const auto &lobe : entry.at("lobes"))
            {
                ParametricLobe l;
                l.frequency_ghz = lobe.at("frequency_ghz").get<double>();
                l.specular_amplitude = lobe.at("specular_amplitude").get<double>();
                l.lobe_width_deg = lobe.at("lobe_width_deg").get<double>();
                l.diffuse_floor = lobe.at("diffuse_floor").get<double>();
                lobes.push_back(l);
            }
            lib.profiles.emplace(mat_name, parametric_profile(mat_name, lobes, angle_step));
        }
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ValidationError(json_path.string() + ": " + e.what());
    }
    if (lib.profiles.empty())
        throw ValidationError(json_path.string() + ": no materials defined");
    return lib;
}

const MaterialProfile &MaterialLibrary::get(const std::string &name) const
{
    auto it = profiles.find(name);
    if (it == profiles.end())
    {
        std::string known;
        for (const auto &[k, v] : profiles)
            known += (known.empty() ? "" : ", ") + k;
        throw ValidationError("unknown material '" + name + "' (known: " + known + ")");
    }
    return it->second;
}

} // namespace terasim

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

#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace terasim
{

// Reflected energy fraction sampled on a rectangular
// (incidence angle, observation angle, frequency) grid. Angles are polar
// angles from the surface normal in degrees; energy values are linear
// fractions of the incident power in [0, 1].
struct MaterialProfile
{
    std::string name;
    std::vector<double> incidence_deg;   // strictly increasing
    std::vector<double> observation_deg; // strictly increasing
    std::vector<double> frequency_ghz;   // strictly increasing
    std::vector<double> energy;          // [i][o][f] flattened, f fastest

    double at(size_t i, size_t o, size_t f) const
    {
        return energy[(i * observation_deg.size() + o) * frequency_ghz.size() + f];
    }
    double &at(size_t i, size_t o, size_t f)
    {
        return energy[(i * observation_deg.size() + o) * frequency_ghz.size() + f];
    }

    double min_frequency_ghz() const { return frequency_ghz.front(); }
    double max_frequency_ghz() const { return frequency_ghz.back(); }

    void validate() const;
};

// One frequency anchor of a parametric reflection model: a Gaussian specular
// lobe of amplitude `specular_amplitude` and width `lobe_width_deg` centered
// on the mirror direction, on top of an angle-independent diffuse floor.
struct ParametricLobe
{
    double frequency_ghz = 0.0;
    double specular_amplitude = 0.0;
    double lobe_width_deg = 10.0;
    double diffuse_floor = 0.0;
};

// Loads a measured profile from CSV with header
// incidence_deg,observation_deg,frequency_ghz,energy_fraction. The samples
// must form a complete rectangular grid; errors cite the offending row.
MaterialProfile load_profile_csv(const std::filesystem::path &path);
MaterialProfile parse_profile_csv(std::istream &in, const std::string &name);

// Samples the parametric model onto a grid: angles 0..90 degrees at
// `angle_step_deg`, frequency axis at the anchor frequencies. Linear
// interpolation between anchors is then exactly the grid interpolation.
MaterialProfile parametric_profile(const std::string &name, std::span<const ParametricLobe> lobes,
                                   double angle_step_deg = 1.5);

// Trilinear interpolation on the profile grid. Angles outside the grid clamp
// to the nearest edge; frequencies outside the tabulated span throw, since
// material response beyond the measured band is unknown.
double energy_fraction(const MaterialProfile &profile, double incidence_deg,
                       double observation_deg, double frequency_ghz);

// Lower cell index and interpolation weight for q on a sorted axis, clamping
// out-of-range queries to the first or last sample. Building block for
// samplers that cache bracket lookups.
std::pair<size_t, double> bracket_axis(const std::vector<double> &axis, double q);

// Writes a profile back out in the same CSV schema the loader accepts,
// rows ordered by (incidence, observation, frequency).
void write_profile_csv(const MaterialProfile &profile, std::ostream &out);

struct MaterialLibrary
{
    std::map<std::string, MaterialProfile> profiles;

    // Builds the named parametric defaults from a JSON calibration file.
    static MaterialLibrary load_defaults(const std::filesystem::path &json_path);

    bool contains(const std::string &name) const { return profiles.count(name) != 0; }
    const MaterialProfile &get(const std::string &name) const;
};

} // namespace terasim

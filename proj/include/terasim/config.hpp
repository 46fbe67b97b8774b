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

#include "terasim/propagation.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace terasim
{

inline constexpr const char *kToolVersion = "0.1.0";

// Radio calibration of a scenario: band plan plus the antenna assignment for
// the three node kinds (wall plug, desk laptop, roaming mobile device).
struct ScenarioPreset
{
    std::string name;
    RadioConfig radio;
    AntennaSpec plug_antenna;
    AntennaSpec laptop_antenna;
    AntennaSpec mobile_antenna;
    // Canonical JSON of the preset after overrides; hashed into the manifest.
    std::string canonical_json;
};

// Loads data/radio/<name>.json, applying the JSON merge-patch in
// `override_file` (RFC 7386) on top when given.
ScenarioPreset load_scenario_preset(const std::string &name,
                                    const std::filesystem::path &data_dir,
                                    const std::filesystem::path &override_file = {});

uint64_t fnv1a64(std::string_view bytes);
std::string to_hex(uint64_t value);

struct RunManifest
{
    std::string config_hash;
    std::string preset;
    std::map<std::string, std::string> overrides; // flag/value pairs beyond defaults
    std::vector<std::string> outputs;             // file names inside the out directory
    std::string version = kToolVersion;
    double duration_s = 0.0;
};

// Writes manifest.json into the output directory.
void write_manifest(const RunManifest &manifest, const std::filesystem::path &out_dir);

} // namespace terasim

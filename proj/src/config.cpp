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

#include "terasim/config.hpp"

#include "terasim/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace terasim
{

namespace
{

nlohmann::json load_json_file(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file: " + path.string());
    try
    {
        nlohmann::json doc;
        in >> doc;
        return doc;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

AntennaSpec antenna_from_json(const nlohmann::json &j, const std::string &ctx)
{
    try
    {
        AntennaSpec a;
        a.boresight_gain_dbi = j.at("boresight_gain_dbi").get<double>();
        a.half_beamwidth_deg = j.at("half_beamwidth_deg").get<double>();
        a.floor_gain_dbi = j.at("floor_gain_dbi").get<double>();
        a.validate();
        return a;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ValidationError(ctx + ": " + e.what());
    }
}

} // namespace

ScenarioPreset load_scenario_preset(const std::string &name,
                                    const std::filesystem::path &data_dir,
                                    const std::filesystem::path &override_file)
{
    if (name != "ieee" && name != "thz")
        throw ValidationError("unknown scenario preset '" + name + "' (expected ieee or thz)");
    std::filesystem::path path = data_dir / "radio" / (name + ".json");
    nlohmann::json doc = load_json_file(path);
    if (!override_file.empty())
        doc.merge_patch(load_json_file(override_file));

    ScenarioPreset preset;
    preset.name = name;
    try
    {
        const auto &r = doc.at("radio");
        preset.radio.center_frequency_ghz = r.at("center_frequency_ghz").get<double>();
        preset.radio.bandwidth_ghz = r.at("bandwidth_ghz").get<double>();
        preset.radio.subband_count = r.at("subband_count").get<int>();
        preset.radio.tx_power_dbm = r.at("tx_power_dbm").get<double>();
        preset.radio.noise_figure_db = r.at("noise_figure_db").get<double>();
        preset.radio.temperature_k = r.at("temperature_k").get<double>();
        preset.radio.mac_efficiency = r.at("mac_efficiency").get<double>();
        preset.radio.molecular_noise = r.value("molecular_noise", false);
        preset.radio.validate();

        const auto &ant = doc.at("antennas");
        preset.plug_antenna = antenna_from_json(ant.at("plug"), path.string() + ": antennas.plug");
        preset.laptop_antenna =
            antenna_from_json(ant.at("laptop"), path.string() + ": antennas.laptop");
        preset.mobile_antenna =
            antenna_from_json(ant.at("mobile"), path.string() + ": antennas.mobile");
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ValidationError(path.string() + ": " + e.what());
    }
    preset.canonical_json = doc.dump();
    return preset;
}

uint64_t fnv1a64(std::string_view bytes)
{
    uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes)
    {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

std::string to_hex(uint64_t value)
{
    static const char *digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i)
    {
        out[static_cast<size_t>(i)] = digits[value & 0xf];
        value >>= 4;
    }
    return out;
}

void write_manifest(const RunManifest &manifest, const std::filesystem::path &out_dir)
{
    nlohmann::json doc;
    doc["config_hash"] = manifest.config_hash;
    doc["preset"] = manifest.preset;
    doc["overrides"] = manifest.overrides;
    doc["outputs"] = manifest.outputs;
    doc["version"] = manifest.version;
    doc["duration_s"] = manifest.duration_s;

    std::filesystem::path path = out_dir / "manifest.json";
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write manifest: " + path.string());
    out << doc.dump(2) << '\n';
}

} // namespace terasim

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

#include "terasim/propagation.hpp"

#include "terasim/csv.hpp"
#include "terasim/errors.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace terasim
{

namespace
{
constexpr double kPi = 3.14159265358979323846;

void require(bool ok, const std::string &msg)
{
    if (!ok)
        throw ValidationError(msg);
}
} // namespace

void AntennaSpec::validate() const
{
    require(std::isfinite(boresight_gain_dbi) && std::isfinite(floor_gain_dbi),
            "antenna: gains must be finite");
    require(half_beamwidth_deg > 0.0 && half_beamwidth_deg <= 180.0,
            "antenna: half beamwidth must be in (0, 180] degrees");
    require(boresight_gain_dbi >= floor_gain_dbi,
            "antenna: boresight gain below floor gain");
}

double antenna_gain_dbi(const AntennaSpec &antenna, double off_boresight_deg)
{
    double a = std::fabs(off_boresight_deg);
    return a <= antenna.half_beamwidth_deg ? antenna.boresight_gain_dbi : antenna.floor_gain_dbi;
}

AbsorptionTable AbsorptionTable::load_csv(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open absorption table: " + path.string());
    return parse_csv(in, path.filename().string());
}

AbsorptionTable AbsorptionTable::parse_csv(std::istream &in, const std::string &name)
{
    AbsorptionTable table;
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
            if (fields.size() != 2 || fields[0] != "frequency_ghz" || fields[1] != "k_per_m")
                throw ValidationError(name + ": row 1: expected header frequency_ghz,k_per_m");
            continue;
        }
        std::string ctx = name + ": row " + std::to_string(row);
        if (fields.size() != 2)
            throw ValidationError(ctx + ": expected 2 fields, got " + std::to_string(fields.size()));
        table.frequency_ghz.push_back(parse_csv_double(fields[0], ctx + " (frequency_ghz)"));
        table.k_per_m.push_back(parse_csv_double(fields[1], ctx + " (k_per_m)"));
        const size_t n = table.frequency_ghz.size();
        if (!(table.k_per_m.back() >= 0.0))
            throw ValidationError(ctx + ": k_per_m must be non-negative");
        if (n > 1 && !(table.frequency_ghz[n - 1] > table.frequency_ghz[n - 2]))
            throw ValidationError(ctx + ": frequency_ghz must be strictly increasing");
    }
    table.validate();
    return table;
}

void AbsorptionTable::validate() const
{
    require(frequency_ghz.size() == k_per_m.size(), "absorption table: column length mismatch");
    require(frequency_ghz.size() >= 2, "absorption table: needs at least two rows");
    for (size_t i = 0; i < frequency_ghz.size(); ++i)
    {
        require(std::isfinite(frequency_ghz[i]) && frequency_ghz[i] > 0.0,
                "absorption table: frequencies must be positive");
        require(std::isfinite(k_per_m[i]) && k_per_m[i] >= 0.0,
                "absorption table: coefficients must be non-negative");
        if (i > 0)
            require(frequency_ghz[i] > frequency_ghz[i - 1],
                    "absorption table: frequencies must be strictly increasing");
    }
}

double AbsorptionTable::coefficient_at(double query_frequency_ghz) const
{
    if (query_frequency_ghz < frequency_ghz.front() || query_frequency_ghz > frequency_ghz.back())
        throw ValidationError("absorption table: frequency " + format_number(query_frequency_ghz) +
                              " GHz outside tabulated span [" +
                              format_number(frequency_ghz.front()) + ", " +
                              format_number(frequency_ghz.back()) + "]");
    auto it = std::lower_bound(frequency_ghz.begin(), frequency_ghz.end(), query_frequency_ghz);
    size_t hi = static_cast<size_t>(it - frequency_ghz.begin());
    if (hi == 0)
        return k_per_m.front();
    if (frequency_ghz[hi] == query_frequency_ghz)
        return k_per_m[hi];
    size_t lo = hi - 1;
    double t = (query_frequency_ghz - frequency_ghz[lo]) / (frequency_ghz[hi] - frequency_ghz[lo]);
    return k_per_m[lo] + t * (k_per_m[hi] - k_per_m[lo]);
}

void RadioConfig::validate() const
{
    require(std::isfinite(center_frequency_ghz) && center_frequency_ghz > 0.0,
            "radio: center frequency must be positive");
    require(std::isfinite(bandwidth_ghz) && bandwidth_ghz > 0.0,
            "radio: bandwidth must be positive");
    require(bandwidth_ghz < 2.0 * center_frequency_ghz,
            "radio: bandwidth extends below zero frequency");
    require(subband_count >= 1, "radio: subband count must be at least 1");
    require(std::isfinite(tx_power_dbm), "radio: transmit power must be finite");
    require(std::isfinite(noise_figure_db) && noise_figure_db >= 0.0,
            "radio: noise figure must be non-negative");
    require(std::isfinite(temperature_k) && temperature_k > 0.0,
            "radio: temperature must be positive");
    require(std::isfinite(mac_efficiency) && mac_efficiency > 0.0 && mac_efficiency <= 1.0,
            "radio: MAC efficiency must be in (0, 1]");
}

double RadioConfig::subband_width_hz() const
{
    return bandwidth_ghz * 1e9 / static_cast<double>(subband_count);
}

std::vector<double> RadioConfig::subband_centers_ghz() const
{
    std::vector<double> centers(static_cast<size_t>(subband_count));
    double step = bandwidth_ghz / static_cast<double>(subband_count);
    double first = center_frequency_ghz - bandwidth_ghz / 2.0 + step / 2.0;
    for (int j = 0; j < subband_count; ++j)
        centers[static_cast<size_t>(j)] = first + step * static_cast<double>(j);
    return centers;
}

double RadioConfig::subband_tx_power_dbm() const
{
    return tx_power_dbm - linear_to_db(static_cast<double>(subband_count));
}

double fspl_db(double distance_m, double frequency_ghz)
{
    if (!(distance_m > 0.0) || !(frequency_ghz > 0.0))
        throw ValidationError("fspl: distance and frequency must be positive");
    double f_hz = frequency_ghz * 1e9;
    return 20.0 * std::log10(4.0 * kPi * distance_m * f_hz / kSpeedOfLight);
}

double absorption_db(double k_per_m, double distance_m)
{
    if (!(distance_m >= 0.0))
        throw ValidationError("absorption: distance must be non-negative");
    // 10*log10(e) converts the exponential attenuation exp(-k*d) to dB.
    return 10.0 * std::log10(std::exp(1.0)) * k_per_m * distance_m;
}

double absorption_db(const AbsorptionTable &table, double distance_m, double frequency_ghz)
{
    return absorption_db(table.coefficient_at(frequency_ghz), distance_m);
}

double thermal_noise_dbm(double bandwidth_hz, double noise_figure_db, double temperature_k)
{
    return 10.0 * std::log10(kBoltzmann * temperature_k * bandwidth_hz * 1000.0) + noise_figure_db;
}

double thermal_noise_dbm(const RadioConfig &cfg)
{
    return thermal_noise_dbm(cfg.subband_width_hz(), cfg.noise_figure_db, cfg.temperature_k);
}

double molecular_noise_fraction(double k_per_m, double distance_m)
{
    return 1.0 - std::exp(-k_per_m * distance_m);
}

double molecular_noise_fraction(const AbsorptionTable &table, double distance_m,
                                double frequency_ghz)
{
    return molecular_noise_fraction(table.coefficient_at(frequency_ghz), distance_m);
}

double noise_power_dbm(const RadioConfig &cfg, double received_dbm, double molecular_beta)
{
    double thermal_mw =
        db_to_linear(thermal_noise_dbm(cfg.subband_width_hz(), cfg.noise_figure_db, cfg.temperature_k));
    if (!cfg.molecular_noise)
        return linear_to_db(thermal_mw);
    double molecular_mw = molecular_beta * db_to_linear(received_dbm);
    return linear_to_db(thermal_mw + molecular_mw);
}

double shannon_capacity_bps(double subband_width_hz, std::span<const double> snr_linear)
{
    double total = 0.0;
    for (double snr : snr_linear)
        total += subband_width_hz * std::log2(1.0 + snr);
    return total;
}

double throughput_bps(const RadioConfig &cfg, double capacity_bps)
{
    return cfg.mac_efficiency * capacity_bps;
}

} // namespace terasim

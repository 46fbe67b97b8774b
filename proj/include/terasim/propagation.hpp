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

#include <cmath>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <vector>

namespace terasim
{

inline constexpr double kSpeedOfLight = 299792458.0; // m/s
inline constexpr double kBoltzmann = 1.380649e-23;   // J/K

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// Sectored cone antenna: boresight gain inside the half beamwidth, a constant
// floor outside. An isotropic antenna is floor == boresight.
struct AntennaSpec
{
    double boresight_gain_dbi = 0.0;
    double half_beamwidth_deg = 180.0;
    double floor_gain_dbi = 0.0;

    void validate() const;
};

// Gain toward a direction `off_boresight_deg` away from the boresight axis.
// The boundary angle itself still gets the boresight gain.
double antenna_gain_dbi(const AntennaSpec &antenna, double off_boresight_deg);

// Frequency-dependent molecular absorption coefficient table, linearly
// interpolated between samples. Queries outside the tabulated span throw;
// extrapolating resonance-line structure silently would fabricate physics.
struct AbsorptionTable
{
    std::vector<double> frequency_ghz; // strictly increasing
    std::vector<double> k_per_m;       // non-negative

    static AbsorptionTable load_csv(const std::filesystem::path &path);
    static AbsorptionTable parse_csv(std::istream &in, const std::string &name);

    double coefficient_at(double query_frequency_ghz) const;
    void validate() const;
};

struct RadioConfig
{
    double center_frequency_ghz = 300.0;
    double bandwidth_ghz = 50.0;
    int subband_count = 64;
    double tx_power_dbm = 0.0;
    double noise_figure_db = 10.0;
    double temperature_k = 296.0;
    double mac_efficiency = 0.1;
    bool molecular_noise = false;

    void validate() const;

    double subband_width_hz() const;
    // Subband j is centered at fc - B/2 + (j + 0.5) * B / n.
    std::vector<double> subband_centers_ghz() const;
    // Transmit power is split evenly across subbands.
    double subband_tx_power_dbm() const;
};

// Free-space path loss 20*log10(4*pi*d*f/c) in dB.
double fspl_db(double distance_m, double frequency_ghz);

// Beer-Lambert absorption loss over a path, 10*log10(e)*k*d in dB.
double absorption_db(double k_per_m, double distance_m);
double absorption_db(const AbsorptionTable &table, double distance_m, double frequency_ghz);

// Thermal noise floor in dBm: 10*log10(k_B * T * B * 1000) + NF. The config
// overload evaluates it for one subband of the band plan.
double thermal_noise_dbm(double bandwidth_hz, double noise_figure_db, double temperature_k);
double thermal_noise_dbm(const RadioConfig &cfg);

// Fraction of received power re-emitted as molecular noise: 1 - exp(-k*d).
double molecular_noise_fraction(double k_per_m, double distance_m);
double molecular_noise_fraction(const AbsorptionTable &table, double distance_m,
                                double frequency_ghz);

// Per-subband noise power in dBm. When `cfg.molecular_noise` is set, the
// molecular term beta * P_rx is added on top of the thermal floor; the
// received power and beta are per-subband quantities.
double noise_power_dbm(const RadioConfig &cfg, double received_dbm, double molecular_beta);

// Shannon capacity in bit/s summed over subbands: sum_j (B/n) * log2(1 + snr_j).
double shannon_capacity_bps(double subband_width_hz, std::span<const double> snr_linear);

// Link-layer throughput: MAC efficiency times capacity.
double throughput_bps(const RadioConfig &cfg, double capacity_bps);

} // namespace terasim

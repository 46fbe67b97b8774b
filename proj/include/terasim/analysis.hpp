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

#include "terasim/raytracer.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace terasim
{

enum class CoverageMode
{
    los, // best path including line of sight
    nlos // line of sight excluded, best reflection wins
};

std::string to_string(CoverageMode mode);

struct CellResult
{
    double snr_db = -INFINITY; // band aggregate: total received / total noise
    double capacity_bps = 0.0;
    double throughput_bps = 0.0;
    CoverageMode mode = CoverageMode::los;
    // "LOS" for the direct path, a surface id for reflections, "none" when no
    // path survives the power floor.
    std::string selected_surface = "none";
    double received_dbm = -INFINITY;
    double path_length_m = 0.0;
};

struct CoverageGrid
{
    Vec3 origin;
    double step_m = 0.1;
    double height_m = 1.0;
    size_t nx = 0;
    size_t ny = 0;
    std::vector<CellResult> cells; // [iy * nx + ix]

    const CellResult &at(size_t ix, size_t iy) const { return cells[iy * nx + ix]; }
    double x_at(size_t ix) const { return origin.x + step_m * static_cast<double>(ix); }
    double y_at(size_t iy) const { return origin.y + step_m * static_cast<double>(iy); }
};

struct AnalysisOptions
{
    double grid_step_m = 0.1;
    double device_height_m = 1.0;
    // Receiver antenna cloned at every grid cell (the roaming device).
    AntennaSpec mobile_antenna{25.0, 10.0, -10.0};
    TraceOptions trace;
    double pdp_bin_width_s = 0.1e-9;
};

// Per-subband link budget for a selected path. When molecular noise is
// enabled in the radio config, each subband's noise floor gains the
// re-radiated term beta * P_rx with beta = 1 - exp(-k(f) * path length).
struct LinkBudget
{
    double received_dbm = -INFINITY;
    double snr_db = -INFINITY;
    double capacity_bps = 0.0;
    double throughput_bps = 0.0;
};

LinkBudget budget_from_gains(std::span<const double> gain_db, double path_length_m,
                             const RadioConfig &cfg, const AbsorptionTable &absorption);

// SNR/capacity map over the room footprint at the device height. Cells are
// lattice points i*step from the origin (both room edges included when step
// divides the room size), so halving the step revisits the same points.
// Cell selection scans LoS and first-order bounces; second-order scatter sits
// tens of dB below first-order in this geometry and never wins a best-path
// comparison, so coverage caps the trace order at 1.
CoverageGrid coverage(const Scene &scene, const RadioConfig &cfg,
                      const MaterialLibrary &materials, const AbsorptionTable &absorption,
                      CoverageMode mode, const AnalysisOptions &options = {});

// Fixed plug-to-laptop link: full trace, budget of the selected path, and the
// power delay profile of everything received.
struct LaptopReport
{
    CellResult cell;
    std::vector<PropagationPath> paths;
    PowerDelayProfile pdp;
};

LaptopReport laptop_link(const Scene &scene, const RadioConfig &cfg,
                         const MaterialLibrary &materials, const AbsorptionTable &absorption,
                         CoverageMode mode = CoverageMode::los,
                         const AnalysisOptions &options = {});

// CSV export: header x_m,y_m,snr_db,capacity_gbps,throughput_gbps,mode,
// selected_surface; rows row-major from the origin (x fastest); SNR of empty
// cells serialized as -inf.
void write_coverage_csv(const CoverageGrid &grid, std::ostream &out);

} // namespace terasim

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

#include "terasim/analysis.hpp"

#include "terasim/csv.hpp"
#include "terasim/errors.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace terasim
{

std::string to_string(CoverageMode mode)
{
    return mode == CoverageMode::los ? "los" : "nlos";
}

LinkBudget budget_from_gains(std::span<const double> gain_db, double path_length_m,
                             const RadioConfig &cfg, const AbsorptionTable &absorption)
{
    LinkBudget budget;
    if (gain_db.empty())
        return budget;
    std::vector<double> centers = cfg.subband_centers_ghz();
    if (centers.size() != gain_db.size())
        throw ValidationError("budget: gain spectrum does not match the subband count");

    double sub_tx = cfg.subband_tx_power_dbm();
    double received_mw = 0.0;
    double noise_mw = 0.0;
    double capacity = 0.0;
    double width = cfg.subband_width_hz();
    for (size_t j = 0; j < gain_db.size(); ++j)
    {
        double r_dbm = sub_tx + gain_db[j];
        double beta = cfg.molecular_noise
                          ? molecular_noise_fraction(absorption, path_length_m, centers[j])
                          : 0.0;
        double n_dbm = noise_power_dbm(cfg, r_dbm, beta);
        double r_mw = db_to_linear(r_dbm);
        double n_mw = db_to_linear(n_dbm);
        received_mw += r_mw;
        noise_mw += n_mw;
        capacity += width * std::log2(1.0 + r_mw / n_mw);
    }
    budget.received_dbm = linear_to_db(received_mw);
    budget.snr_db = linear_to_db(received_mw / noise_mw);
    budget.capacity_bps = capacity;
    budget.throughput_bps = throughput_bps(cfg, capacity);
    return budget;
}

CoverageGrid coverage(const Scene &scene, const RadioConfig &cfg,
                      const MaterialLibrary &materials, const AbsorptionTable &absorption,
                      CoverageMode mode, const AnalysisOptions &options)
{
    if (!(options.grid_step_m > 0.0))
        throw ValidationError("coverage: grid step must be positive");

    TraceOptions trace_opt = options.trace;
    trace_opt.max_order = std::min(trace_opt.max_order, 1);
    TraceEngine engine(scene, cfg, materials, absorption, trace_opt);
    engine.set_transmitter(scene.node_by_role(NodeRole::transmitter));

    CoverageGrid grid;
    grid.origin = {0.0, 0.0, options.device_height_m};
    grid.step_m = options.grid_step_m;
    grid.height_m = options.device_height_m;
    grid.nx = static_cast<size_t>(std::floor(scene.room_dims.x / options.grid_step_m + 1e-9)) + 1;
    grid.ny = static_cast<size_t>(std::floor(scene.room_dims.y / options.grid_step_m + 1e-9)) + 1;
    grid.cells.assign(grid.nx * grid.ny, CellResult{});

    long long total = static_cast<long long>(grid.nx * grid.ny);
    bool exclude_los = mode == CoverageMode::nlos;
#ifdef _OPENMP
    int nthreads = options.trace.threads > 0 ? options.trace.threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nthreads)
#endif
    for (long long idx = 0; idx < total; ++idx)
    {
        size_t ix = static_cast<size_t>(idx) % grid.nx;
        size_t iy = static_cast<size_t>(idx) / grid.nx;
        Vec3 pos{grid.x_at(ix), grid.y_at(iy), options.device_height_m};
        TraceEngine::SinglePick pick =
            engine.best_first_order(pos, options.mobile_antenna, exclude_los);
        CellResult &cell = grid.cells[static_cast<size_t>(idx)];
        cell.mode = mode;
        if (!pick.found)
            continue;
        LinkBudget b = budget_from_gains(pick.gain_db, pick.length_m, cfg, absorption);
        cell.snr_db = b.snr_db;
        cell.capacity_bps = b.capacity_bps;
        cell.throughput_bps = b.throughput_bps;
        cell.received_dbm = b.received_dbm;
        cell.path_length_m = pick.length_m;
        cell.selected_surface = pick.los ? "LOS" : pick.surface;
    }
    return grid;
}

LaptopReport laptop_link(const Scene &scene, const RadioConfig &cfg,
                         const MaterialLibrary &materials, const AbsorptionTable &absorption,
                         CoverageMode mode, const AnalysisOptions &options)
{
    const Node &tx = scene.node_by_role(NodeRole::transmitter);
    const Node &rx = scene.node_by_role(NodeRole::receiver);

    TraceEngine engine(scene, cfg, materials, absorption, options.trace);
    LaptopReport report;
    report.paths = engine.trace(tx, rx, true);
    report.pdp = build_pdp(report.paths, options.pdp_bin_width_s, cfg.center_frequency_ghz, cfg);

    report.cell.mode = mode;
    TraceEngine::SinglePick pick;
    try
    {
        pick = best_surface_group(report.paths, cfg, mode == CoverageMode::nlos);
    }
    catch (const ValidationError &)
    {
        return report; // no surviving candidate: sentinel cell
    }
    LinkBudget b = budget_from_gains(pick.gain_db, pick.length_m, cfg, absorption);
    report.cell.snr_db = b.snr_db;
    report.cell.capacity_bps = b.capacity_bps;
    report.cell.throughput_bps = b.throughput_bps;
    report.cell.received_dbm = b.received_dbm;
    report.cell.path_length_m = pick.length_m;
    report.cell.selected_surface = pick.los ? "LOS" : pick.surface;
    return report;
}

void write_coverage_csv(const CoverageGrid &grid, std::ostream &out)
{
    out << "x_m,y_m,snr_db,capacity_gbps,throughput_gbps,mode,selected_surface\n";
    for (size_t iy = 0; iy < grid.ny; ++iy)
        for (size_t ix = 0; ix < grid.nx; ++ix)
        {
            const CellResult &c = grid.at(ix, iy);
            out << format_number(grid.x_at(ix)) << ',' << format_number(grid.y_at(iy)) << ','
                << format_number(c.snr_db) << ',' << format_number(c.capacity_bps / 1e9) << ','
                << format_number(c.throughput_bps / 1e9) << ',' << to_string(c.mode) << ','
                << c.selected_surface << '\n';
        }
}

} // namespace terasim

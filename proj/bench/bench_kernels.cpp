// terasim: deterministic indoor terahertz radio propagation simulator
// Copyright (C) 2026 terasim contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Times the parallel trace and coverage kernels against the serial reference
// and verifies the outputs are bit-identical. Exits nonzero on any mismatch
// so it can run as a regression check.

#include "terasim/analysis.hpp"
#include "terasim/config.hpp"
#include "terasim/propagation.hpp"
#include "terasim/raytracer.hpp"
#include "terasim/scene.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

using namespace terasim;
using Clock = std::chrono::steady_clock;

namespace
{

double time_best_of(int runs, const std::function<void()> &fn)
{
    double best = 1e300;
    for (int i = 0; i < runs; ++i)
    {
        const auto t0 = Clock::now();
        fn();
        const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
        best = std::min(best, dt);
    }
    return best;
}

bool paths_identical(const std::vector<PropagationPath> &a, const std::vector<PropagationPath> &b)
{
    if (a.size() != b.size())
        return false;
    for (size_t i = 0; i < a.size(); ++i)
    {
        if (a[i].surface_trace != b[i].surface_trace)
            return false;
        if (std::memcmp(&a[i].delay_s, &b[i].delay_s, sizeof(double)) != 0)
            return false;
        if (std::memcmp(&a[i].length_m, &b[i].length_m, sizeof(double)) != 0)
            return false;
        if (a[i].gain.gain_db.size() != b[i].gain.gain_db.size())
            return false;
        if (!a[i].gain.gain_db.empty() &&
            std::memcmp(a[i].gain.gain_db.data(), b[i].gain.gain_db.data(),
                        a[i].gain.gain_db.size() * sizeof(double)) != 0)
            return false;
    }
    return true;
}

bool grids_identical(const CoverageGrid &a, const CoverageGrid &b)
{
    if (a.nx != b.nx || a.ny != b.ny)
        return false;
    for (size_t i = 0; i < a.cells.size(); ++i)
    {
        if (std::memcmp(&a.cells[i].snr_db, &b.cells[i].snr_db, sizeof(double)) != 0)
            return false;
        if (std::memcmp(&a.cells[i].capacity_bps, &b.cells[i].capacity_bps, sizeof(double)) != 0)
            return false;
        if (a.cells[i].selected_surface != b.cells[i].selected_surface)
            return false;
    }
    return true;
}

} // namespace

int main(int argc, char **argv)
{
    double segment_size = 0.05;
    int runs = 3;
    for (int i = 1; i < argc; ++i)
    {
        const std::string arg = argv[i];
        if (arg == "--segment-size" && i + 1 < argc)
            segment_size = std::stod(argv[++i]);
        else if (arg == "--runs" && i + 1 < argc)
            runs = std::stoi(argv[++i]);
        else
        {
            std::cerr << "usage: terasim_bench [--segment-size m] [--runs n]\n";
            return 2;
        }
    }

    const auto data_dir = default_data_dir();
    Scene scene = build_office_scene("ieee", data_dir);
    ScenarioPreset preset = load_scenario_preset("ieee", data_dir);
    MaterialLibrary materials = MaterialLibrary::load_defaults(data_dir / "materials/defaults.json");
    AbsorptionTable absorption = AbsorptionTable::load_csv(data_dir / "absorption/indoor_air.csv");

    const Node &tx = scene.node_by_role(NodeRole::transmitter);
    const Node &rx = scene.node_by_role(NodeRole::receiver);

    TraceOptions topt;
    topt.segment_size_m = segment_size;
    topt.max_order = 2;

    std::vector<PropagationPath> serial_paths;
    std::vector<PropagationPath> parallel_paths;
    const double t_serial = time_best_of(runs, [&] {
        serial_paths = trace_paths_serial(scene, tx, rx, preset.radio, materials, absorption, topt);
    });
    const double t_parallel = time_best_of(runs, [&] {
        parallel_paths = trace_paths(scene, tx, rx, preset.radio, materials, absorption, topt);
    });

    std::cout << "trace (order 2, segment " << segment_size << " m, " << serial_paths.size()
              << " paths)\n";
    std::cout << "  serial   " << t_serial * 1e3 << " ms\n";
    std::cout << "  parallel " << t_parallel * 1e3 << " ms  (speedup "
              << (t_parallel > 0 ? t_serial / t_parallel : 0.0) << "x)\n";
    const bool trace_ok = paths_identical(serial_paths, parallel_paths);
    std::cout << "  bit-identical: " << (trace_ok ? "yes" : "NO") << "\n";

    AnalysisOptions aopt;
    aopt.grid_step_m = 0.2;
    aopt.mobile_antenna = preset.mobile_antenna;
    aopt.trace = topt;
    aopt.trace.max_order = 1;

    CoverageGrid grid_one;
    CoverageGrid grid_all;
    AnalysisOptions aopt_one = aopt;
    aopt_one.trace.threads = 1;
    const double t_cov_one = time_best_of(runs, [&] {
        grid_one = coverage(scene, preset.radio, materials, absorption, CoverageMode::los, aopt_one);
    });
    const double t_cov_all = time_best_of(runs, [&] {
        grid_all = coverage(scene, preset.radio, materials, absorption, CoverageMode::los, aopt);
    });

    std::cout << "coverage (los, step " << aopt.grid_step_m << " m, " << grid_all.nx << "x"
              << grid_all.ny << " cells)\n";
    std::cout << "  1 thread   " << t_cov_one * 1e3 << " ms\n";
    std::cout << "  all cores  " << t_cov_all * 1e3 << " ms  (speedup "
              << (t_cov_all > 0 ? t_cov_one / t_cov_all : 0.0) << "x)\n";
    const bool cov_ok = grids_identical(grid_one, grid_all);
    std::cout << "  bit-identical: " << (cov_ok ? "yes" : "NO") << "\n";

    return (trace_ok && cov_ok) ? 0 : 1;
}

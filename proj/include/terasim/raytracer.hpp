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

#include "terasim/materials.hpp"
#include "terasim/propagation.hpp"
#include "terasim/scene.hpp"
#include "terasim/vec3.hpp"

#include <map>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace terasim
{

// Per-subband end-to-end gain (antennas included, transmit power excluded).
struct PathGainSpectrum
{
    std::vector<double> gain_db;

    // 10*log10 of the summed linear subband gains; the path ranking metric.
    double total_gain_db() const;
};

struct PropagationPath
{
    std::vector<Vec3> hops;                 // tx, segment centers..., rx
    std::vector<std::string> surface_trace; // empty for the LoS path
    double length_m = 0.0;
    double delay_s = 0.0;
    PathGainSpectrum gain;

    bool is_los() const { return surface_trace.empty(); }
};

struct TraceOptions
{
    int max_order = 2;
    double power_floor_dbm = -180.0;
    double segment_size_m = 0.05;
    // Second-order chains use a coarser tessellation: the pair count grows
    // with the fourth power of the linear segment density, and the scattered
    // field they carry is smooth at this scale.
    double second_order_segment_size_m = 0.5;
    int threads = 0; // 0 = OpenMP runtime default
};

// Reusable tracing state: tessellations, per-subband absorption samples and
// material interpolation brackets, all immutable during tracing. Both the
// batch tracer and the streaming coverage scan run on the same per-segment
// gain kernels, so their physics cannot drift apart.
class TraceEngine
{
  public:
    TraceEngine(const Scene &scene, const RadioConfig &cfg, const MaterialLibrary &materials,
                const AbsorptionTable &absorption, const TraceOptions &options = {});
    ~TraceEngine();
    TraceEngine(TraceEngine &&) noexcept;
    TraceEngine &operator=(TraceEngine &&) noexcept;

    // Full path enumeration, sorted by (delay, surface_trace), pruned at the
    // power floor. `parallel=false` runs the plain-loop reference kernels;
    // both variants produce bit-identical output.
    std::vector<PropagationPath> trace(const Node &tx, const Node &rx,
                                       bool parallel = true) const;

    // Fixes the transmitter for best_first_order and precomputes per-segment
    // transmit-side geometry shared by every receive point.
    void set_transmitter(const Node &tx);

    // Strongest arrival toward one receive point. A reflection candidate is
    // one surface's whole first-order contribution: segments are an
    // integration mesh over the specular zone, so their subband powers add
    // linearly into a per-surface group before candidates are compared.
    struct SinglePick
    {
        bool found = false;
        bool los = false;
        std::string surface;             // reflecting surface for bounce picks
        double total_dbm = -INFINITY;    // group total received power
        double length_m = 0.0;           // length of the group's strongest segment
        std::vector<double> gain_db;     // per-subband group gain
    };
    // Picks the best of the LoS path and the per-surface first-order groups
    // without materializing a path list. Requires set_transmitter.
    SinglePick best_first_order(const Vec3 &rx_pos, const AntennaSpec &rx_antenna,
                                bool exclude_los) const;

    const RadioConfig &radio() const;
    const TraceOptions &options() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Enumerates LoS plus first- and second-order surface-interaction paths.
// Output is sorted by (delay, surface_trace) and is bit-identical for any
// thread count. Paths whose total received power falls below
// power_floor_dbm are pruned.
std::vector<PropagationPath> trace_paths(const Scene &scene, const Node &tx, const Node &rx,
                                         const RadioConfig &cfg, const MaterialLibrary &materials,
                                         const AbsorptionTable &absorption,
                                         const TraceOptions &options = {});

// Plain-loop reference implementation; produces bit-identical output to
// trace_paths and exists to pin the parallel kernels down in tests.
std::vector<PropagationPath> trace_paths_serial(const Scene &scene, const Node &tx,
                                                const Node &rx, const RadioConfig &cfg,
                                                const MaterialLibrary &materials,
                                                const AbsorptionTable &absorption,
                                                const TraceOptions &options = {});

// Total received power of a path in dBm: transmit power is split evenly
// across subbands, each subband applies its own gain, and the subband
// powers add up linearly.
double path_received_dbm(const PropagationPath &path, const RadioConfig &cfg);

// Per-subband received power in dBm.
std::vector<double> path_received_subbands_dbm(const PropagationPath &path,
                                               const RadioConfig &cfg);

struct PowerDelayProfile
{
    double bin_width_s = 0.1e-9;
    double frequency_ghz = 300.0;
    // Aggregate received power per delay bin, dBm; empty bins are -inf.
    std::vector<double> bins_dbm;
    // Same series split by the first surface touched; LoS power appears only
    // in the aggregate.
    std::map<std::string, std::vector<double>> per_surface_dbm;
};

// Accumulates each path's subband-averaged received power (linear domain)
// into bin floor(delay / bin_width). `frequency_ghz` labels the band center
// the paths were traced at.
PowerDelayProfile build_pdp(std::span<const PropagationPath> paths, double bin_width_s,
                            double frequency_ghz, const RadioConfig &cfg);

// Path maximizing total received power; ties broken by smaller delay, then
// lexicographically smaller surface trace. Throws when no candidate remains.
const PropagationPath &best_path(std::span<const PropagationPath> paths, bool exclude_los);

// Batch counterpart of TraceEngine::best_first_order: groups reflected paths
// by the first surface touched, sums their subband powers linearly, and
// returns the strongest of the LoS path and the groups. length_m is the
// length of the group's strongest member. Throws when no candidate remains.
TraceEngine::SinglePick best_surface_group(std::span<const PropagationPath> paths,
                                           const RadioConfig &cfg, bool exclude_los);

// CSV export: header delay_ns,surface,power_dbm; aggregate rows use
// surface=ALL; rows ordered by delay, then surface name.
void write_pdp_csv(const PowerDelayProfile &pdp, std::ostream &out);

} // namespace terasim

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

// Batch front-end. Loads the office scene plus a scenario preset, runs the
// requested analysis, and writes CSV outputs plus a run manifest into the
// output directory. Exit codes: 0 success, 2 usage, 3 unreadable or
// unwritable file, 4 validation failure, 1 anything else.

#include "terasim/analysis.hpp"
#include "terasim/config.hpp"
#include "terasim/csv.hpp"
#include "terasim/errors.hpp"
#include "terasim/materials.hpp"
#include "terasim/propagation.hpp"
#include "terasim/raytracer.hpp"
#include "terasim/scene.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace terasim;

namespace
{

std::string slurp(const fs::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Everything that shapes the numbers goes through this one struct so the
// manifest hash can be computed from it uniformly.
struct RunArgs
{
    std::string command;
    std::string scenario = "ieee";
    std::string mode = "los";
    double grid_step_m = 0.1;
    double segment_size_m = 0.05;
    int max_order = 2;
    std::vector<double> frequencies_ghz; // pdp only; empty = default sweep
    fs::path out_dir;
    fs::path config_path; // JSON merge-patch over the preset
    bool molecular_noise = false;
    int threads = 0; // operational only; never enters the manifest
};

fs::path default_out_dir()
{
    if (const char *env = std::getenv("TERASIM_OUT"); env != nullptr && *env != '\0')
        return fs::path(env);
    return fs::path("out");
}

void ensure_dir(const fs::path &dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

std::ofstream open_output(const fs::path &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path.string());
    return out;
}

CoverageMode parse_mode(const std::string &mode)
{
    return mode == "nlos" ? CoverageMode::nlos : CoverageMode::los;
}

// The manifest hash covers every input that determines output bytes: the
// merged preset, the scene / material / absorption files, and the numeric
// flags. Thread count and output directory are deliberately excluded.
std::string run_hash(const RunArgs &args, const ScenarioPreset &preset, const fs::path &data_dir)
{
    std::ostringstream feed;
    feed << "command=" << args.command << '\n';
    feed << "preset=" << preset.canonical_json << '\n';
    feed << "scene=" << slurp(data_dir / "scenes/office.json") << '\n';
    feed << "materials=" << slurp(data_dir / "materials/defaults.json") << '\n';
    feed << "absorption=" << slurp(data_dir / "absorption/indoor_air.csv") << '\n';
    feed << "mode=" << args.mode << '\n';
    feed << "grid_step=" << format_number(args.grid_step_m) << '\n';
    feed << "segment_size=" << format_number(args.segment_size_m) << '\n';
    feed << "max_order=" << args.max_order << '\n';
    feed << "molecular_noise=" << (args.molecular_noise ? 1 : 0) << '\n';
    feed << "freqs=";
    for (double f : args.frequencies_ghz)
        feed << format_number(f) << ',';
    feed << '\n';
    return to_hex(fnv1a64(feed.str()));
}

// A laptop-style report row; shared by the laptop summary CSV.
void write_link_csv(const CellResult &cell, std::ostream &out)
{
    out << "snr_db,capacity_gbps,throughput_gbps,received_dbm,path_length_m,mode,selected_surface\n";
    out << format_number(cell.snr_db) << ',' << format_number(cell.capacity_bps / 1e9) << ','
        << format_number(cell.throughput_bps / 1e9) << ',' << format_number(cell.received_dbm)
        << ',' << format_number(cell.path_length_m) << ',' << to_string(cell.mode) << ','
        << cell.selected_surface << '\n';
}

struct LoadedWorld
{
    ScenarioPreset preset;
    Scene scene;
    MaterialLibrary materials;
    AbsorptionTable absorption;
    AnalysisOptions options;
};

LoadedWorld load_world(const RunArgs &args, const fs::path &data_dir)
{
    LoadedWorld world;
    world.preset = load_scenario_preset(args.scenario, data_dir, args.config_path);
    world.scene = Scene::load_json(data_dir / "scenes/office.json");
    for (Node &node : world.scene.nodes)
    {
        if (node.role == NodeRole::transmitter)
            node.antenna = world.preset.plug_antenna;
        else
            node.antenna = world.preset.laptop_antenna;
    }
    world.materials = MaterialLibrary::load_defaults(data_dir / "materials/defaults.json");
    world.absorption = AbsorptionTable::load_csv(data_dir / "absorption/indoor_air.csv");

    world.options.grid_step_m = args.grid_step_m;
    world.options.mobile_antenna = world.preset.mobile_antenna;
    world.options.trace.segment_size_m = args.segment_size_m;
    world.options.trace.max_order = args.max_order;
    world.options.trace.threads = args.threads;
    return world;
}

int run_pdp(const RunArgs &args, const fs::path &data_dir, RunManifest &manifest)
{
    LoadedWorld world = load_world(args, data_dir);
    std::vector<double> freqs = args.frequencies_ghz;
    if (freqs.empty())
        freqs = {300.0, 1000.0, 3000.0};
    const CoverageMode mode = parse_mode(args.mode);
    for (double f : freqs)
    {
        RadioConfig cfg = world.preset.radio;
        cfg.center_frequency_ghz = f;
        cfg.molecular_noise = args.molecular_noise;
        LaptopReport report = laptop_link(world.scene, cfg, world.materials, world.absorption,
                                          mode, world.options);
        const std::string name = "pdp_" + format_number(f) + "ghz.csv";
        auto out = open_output(args.out_dir / name);
        write_pdp_csv(report.pdp, out);
        manifest.outputs.push_back(name);
        std::cout << "wrote " << (args.out_dir / name).string() << " (" << report.paths.size()
                  << " paths)\n";
    }
    return 0;
}

int run_laptop(const RunArgs &args, const fs::path &data_dir, RunManifest &manifest)
{
    LoadedWorld world = load_world(args, data_dir);
    RadioConfig cfg = world.preset.radio;
    cfg.molecular_noise = args.molecular_noise;
    LaptopReport report = laptop_link(world.scene, cfg, world.materials, world.absorption,
                                      parse_mode(args.mode), world.options);
    const std::string name = "laptop.csv";
    auto out = open_output(args.out_dir / name);
    write_link_csv(report.cell, out);
    manifest.outputs.push_back(name);
    std::cout << "laptop link (" << args.scenario << ", " << args.mode
              << "): snr = " << format_number(report.cell.snr_db)
              << " dB, capacity = " << format_number(report.cell.capacity_bps / 1e9)
              << " Gbit/s, throughput = " << format_number(report.cell.throughput_bps / 1e9)
              << " Gbit/s via " << report.cell.selected_surface << '\n';
    std::cout << "wrote " << (args.out_dir / name).string() << '\n';
    return 0;
}

int run_coverage(const RunArgs &args, const fs::path &data_dir, RunManifest &manifest)
{
    LoadedWorld world = load_world(args, data_dir);
    RadioConfig cfg = world.preset.radio;
    cfg.molecular_noise = args.molecular_noise;
    CoverageGrid grid = coverage(world.scene, cfg, world.materials, world.absorption,
                                 parse_mode(args.mode), world.options);
    const std::string name = "coverage_" + args.mode + ".csv";
    auto out = open_output(args.out_dir / name);
    write_coverage_csv(grid, out);
    manifest.outputs.push_back(name);
    std::cout << "wrote " << (args.out_dir / name).string() << " (" << grid.nx << "x" << grid.ny
              << " cells)\n";
    return 0;
}

int run_materials_validate(const fs::path &file)
{
    MaterialProfile profile = load_profile_csv(file);
    profile.validate();
    std::cout << "ok: " << profile.name << ": " << profile.incidence_deg.size() << " x "
              << profile.observation_deg.size() << " x " << profile.frequency_ghz.size()
              << " grid, " << format_number(profile.min_frequency_ghz()) << "-"
              << format_number(profile.max_frequency_ghz()) << " GHz\n";
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    RunArgs args;
    args.out_dir = default_out_dir();

    CLI::App app{"terasim: deterministic indoor terahertz propagation simulator"};
    app.require_subcommand(1);

    std::string materials_file;

    auto add_common = [&](CLI::App *cmd, bool with_grid, bool with_freq) {
        cmd->add_option("--scenario", args.scenario, "Scenario preset")
            ->check(CLI::IsMember({"ieee", "thz"}))
            ->capture_default_str();
        cmd->add_option("--mode", args.mode, "Path selection mode")
            ->check(CLI::IsMember({"los", "nlos"}))
            ->capture_default_str();
        if (with_grid)
            cmd->add_option("--grid-step", args.grid_step_m, "Coverage lattice step in metres")
                ->check(CLI::PositiveNumber)
                ->capture_default_str();
        cmd->add_option("--segment-size", args.segment_size_m,
                        "Surface tessellation size in metres")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--max-order", args.max_order, "Highest reflection order traced")
            ->check(CLI::Range(0, 2))
            ->capture_default_str();
        if (with_freq)
            cmd->add_option("--freq", args.frequencies_ghz,
                            "Carrier frequency in GHz (repeatable; default 300 1000 3000)");
        cmd->add_option("--out", args.out_dir, "Output directory (default $TERASIM_OUT or ./out)");
        cmd->add_option("--config", args.config_path,
                        "JSON merge-patch applied over the scenario preset")
            ->check(CLI::ExistingFile);
        cmd->add_flag("--molecular-noise", args.molecular_noise,
                      "Add re-radiated molecular absorption to the noise floor");
        cmd->add_option("--threads", args.threads,
                        "Worker thread cap (0 = all cores); never changes output bytes")
            ->check(CLI::NonNegativeNumber);
    };

    CLI::App *pdp = app.add_subcommand("pdp", "Power delay profiles for the plug-laptop link");
    add_common(pdp, false, true);
    CLI::App *laptop = app.add_subcommand("laptop", "Link budget summary for the plug-laptop link");
    add_common(laptop, false, false);
    CLI::App *cover = app.add_subcommand("coverage", "SNR/capacity map over the room footprint");
    add_common(cover, true, false);

    CLI::App *materials = app.add_subcommand("materials", "Material table utilities");
    materials->require_subcommand(1);
    CLI::App *validate = materials->add_subcommand("validate", "Ingest and invariant-check a CSV");
    validate->add_option("file", materials_file, "Reflection profile CSV")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return 2;
    }

    const auto started = std::chrono::steady_clock::now();
    try
    {
        if (materials->parsed())
            return run_materials_validate(materials_file);

        const fs::path data_dir = default_data_dir();
        ensure_dir(args.out_dir);

        RunManifest manifest;
        manifest.preset = args.scenario;
        CLI::App *cmd = app.get_subcommands().front();
        for (const CLI::Option *opt : cmd->get_options())
        {
            if (opt->count() > 0 && !opt->get_lnames().empty())
            {
                const std::string &lname = opt->get_lnames().front();
                if (lname == "threads" || lname == "out" || lname == "help")
                    continue;
                std::string joined;
                for (const std::string &v : opt->results())
                    joined += (joined.empty() ? "" : ",") + v;
                manifest.overrides[lname] = opt->results().empty() ? "true" : joined;
            }
        }

        int status = 0;
        if (pdp->parsed())
        {
            args.command = "pdp";
            status = run_pdp(args, data_dir, manifest);
        }
        else if (laptop->parsed())
        {
            args.command = "laptop";
            status = run_laptop(args, data_dir, manifest);
        }
        else
        {
            args.command = "coverage";
            status = run_coverage(args, data_dir, manifest);
        }

        const ScenarioPreset preset = load_scenario_preset(args.scenario, data_dir, args.config_path);
        manifest.config_hash = run_hash(args, preset, data_dir);
        manifest.duration_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        write_manifest(manifest, args.out_dir);
        std::cout << "wrote " << (args.out_dir / "manifest.json").string() << '\n';
        return status;
    }
    catch (const IoError &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    catch (const ValidationError &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

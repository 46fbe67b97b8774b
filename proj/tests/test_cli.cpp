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

// End-to-end checks of the command-line tool as a subprocess: exit codes,
// output files, manifest contents and byte-level reproducibility.

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace
{

struct RunResult
{
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path &path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

fs::path fresh_dir(const std::string &tag)
{
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path() /
                         ("terasim_cli_" + tag + "_" + std::to_string(getpid()) + "_" +
                          std::to_string(++counter));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

RunResult run_cli(const std::string &args)
{
    const fs::path io = fresh_dir("io");
    const fs::path out_file = io / "stdout.txt";
    const fs::path err_file = io / "stderr.txt";
    const std::string cmd = std::string(TERASIM_CLI_PATH) + " " + args + " > " +
                            out_file.string() + " 2> " + err_file.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    if (status != -1 && WIFEXITED(status))
        r.code = WEXITSTATUS(status);
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

} // namespace

TEST_CASE("usage errors exit with code 2")
{
    CHECK(run_cli("").code == 2);
    CHECK(run_cli("pdp --bogus-flag").code == 2);
    CHECK(run_cli("coverage --scenario granite").code == 2);
    CHECK(run_cli("coverage --max-order 7").code == 2);
    CHECK(run_cli("materials").code == 2);
}

TEST_CASE("help exits cleanly")
{
    const RunResult r = run_cli("--help");
    CHECK(r.code == 0);
    CHECK(r.out.find("coverage") != std::string::npos);
}

TEST_CASE("unreadable input exits with code 3")
{
    const RunResult r = run_cli("materials validate /nonexistent/profile.csv");
    CHECK(r.code == 3);
    CHECK(r.err.find("/nonexistent/profile.csv") != std::string::npos);
}

TEST_CASE("material validation failures exit with code 4 and cite the row")
{
    const fs::path dir = fresh_dir("bad_materials");
    {
        std::ofstream out(dir / "bad.csv");
        out << "incidence_deg,observation_deg,frequency_ghz,energy_fraction\n"
            << "0,0,100,0.5\n"
            << "0,0,200,1.5\n";
    }
    const RunResult r = run_cli("materials validate " + (dir / "bad.csv").string());
    CHECK(r.code == 4);
    CHECK(r.err.find("row 3") != std::string::npos);
}

TEST_CASE("material validation accepts a complete grid")
{
    const fs::path dir = fresh_dir("good_materials");
    {
        std::ofstream out(dir / "good.csv");
        out << "incidence_deg,observation_deg,frequency_ghz,energy_fraction\n";
        for (double inc : {0.0, 90.0})
            for (double obs : {0.0, 90.0})
                for (double f : {100.0, 200.0})
                    out << inc << ',' << obs << ',' << f << ",0.25\n";
    }
    const RunResult r = run_cli("materials validate " + (dir / "good.csv").string());
    CHECK(r.code == 0);
    CHECK(r.out.find("ok:") != std::string::npos);
}

TEST_CASE("pdp writes one CSV per frequency plus a manifest")
{
    const fs::path out = fresh_dir("pdp");
    const RunResult r =
        run_cli("pdp --scenario ieee --freq 300 --segment-size 0.1 --out " + out.string());
    REQUIRE(r.code == 0);
    CHECK(fs::exists(out / "pdp_300ghz.csv"));
    REQUIRE(fs::exists(out / "manifest.json"));

    const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
    CHECK(manifest.at("preset") == "ieee");
    CHECK(manifest.at("version") == "0.1.0");
    CHECK(manifest.at("config_hash").get<std::string>().size() == 16);
    CHECK(manifest.at("duration_s").get<double>() > 0.0);
    const auto outputs = manifest.at("outputs");
    REQUIRE(outputs.size() == 1);
    CHECK(outputs[0] == "pdp_300ghz.csv");
    // Every listed output exists.
    for (const auto &name : outputs)
        CHECK(fs::exists(out / name.get<std::string>()));
    // Flags that shaped the run are recorded.
    CHECK(manifest.at("overrides").contains("freq"));
    CHECK(manifest.at("overrides").contains("segment-size"));

    // The first data line is the LoS bin and it is the strongest.
    std::istringstream csv(slurp(out / "pdp_300ghz.csv"));
    std::string header, first;
    std::getline(csv, header);
    CHECK(header == "delay_ns,surface,power_dbm");
    std::getline(csv, first);
    CHECK(first.find("ALL") != std::string::npos);
}

TEST_CASE("default pdp sweep covers three band centers")
{
    const fs::path out = fresh_dir("pdp_sweep");
    const RunResult r =
        run_cli("pdp --segment-size 0.2 --max-order 1 --out " + out.string());
    REQUIRE(r.code == 0);
    CHECK(fs::exists(out / "pdp_300ghz.csv"));
    CHECK(fs::exists(out / "pdp_1000ghz.csv"));
    CHECK(fs::exists(out / "pdp_3000ghz.csv"));
    const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
    CHECK(manifest.at("outputs").size() == 3);
}

TEST_CASE("identical runs produce identical bytes and hashes")
{
    const fs::path a = fresh_dir("rep_a");
    const fs::path b = fresh_dir("rep_b");
    REQUIRE(run_cli("laptop --scenario ieee --out " + a.string()).code == 0);
    REQUIRE(run_cli("laptop --scenario ieee --out " + b.string()).code == 0);

    CHECK(slurp(a / "laptop.csv") == slurp(b / "laptop.csv"));
    const auto ma = nlohmann::json::parse(slurp(a / "manifest.json"));
    const auto mb = nlohmann::json::parse(slurp(b / "manifest.json"));
    CHECK(ma.at("config_hash") == mb.at("config_hash"));
}

TEST_CASE("thread count changes neither bytes nor the hash")
{
    const fs::path a = fresh_dir("thr_1");
    const fs::path b = fresh_dir("thr_4");
    const std::string common = "coverage --scenario ieee --grid-step 0.5 --segment-size 0.1 ";
    REQUIRE(run_cli(common + "--threads 1 --out " + a.string()).code == 0);
    REQUIRE(run_cli(common + "--threads 4 --out " + b.string()).code == 0);

    CHECK(slurp(a / "coverage_los.csv") == slurp(b / "coverage_los.csv"));
    const auto ma = nlohmann::json::parse(slurp(a / "manifest.json"));
    const auto mb = nlohmann::json::parse(slurp(b / "manifest.json"));
    CHECK(ma.at("config_hash") == mb.at("config_hash"));
    CHECK(!ma.at("overrides").contains("threads"));
}

TEST_CASE("coverage file name follows the mode")
{
    const fs::path out = fresh_dir("cov_nlos");
    const RunResult r = run_cli(
        "coverage --mode nlos --grid-step 1 --segment-size 0.2 --out " + out.string());
    REQUIRE(r.code == 0);
    CHECK(fs::exists(out / "coverage_nlos.csv"));
    std::istringstream csv(slurp(out / "coverage_nlos.csv"));
    std::string header;
    std::getline(csv, header);
    CHECK(header == "x_m,y_m,snr_db,capacity_gbps,throughput_gbps,mode,selected_surface");
}

TEST_CASE("config overrides change the outputs and the hash")
{
    const fs::path base = fresh_dir("cfg_base");
    const fs::path boosted = fresh_dir("cfg_boost");
    const fs::path patch = fresh_dir("cfg_patch") / "override.json";
    {
        std::ofstream out(patch);
        out << R"({"radio": {"tx_power_dbm": 10.0}})";
    }
    REQUIRE(run_cli("laptop --out " + base.string()).code == 0);
    REQUIRE(run_cli("laptop --config " + patch.string() + " --out " + boosted.string()).code == 0);

    CHECK(slurp(base / "laptop.csv") != slurp(boosted / "laptop.csv"));
    const auto ma = nlohmann::json::parse(slurp(base / "manifest.json"));
    const auto mb = nlohmann::json::parse(slurp(boosted / "manifest.json"));
    CHECK(ma.at("config_hash") != mb.at("config_hash"));
    CHECK(mb.at("overrides").contains("config"));
}

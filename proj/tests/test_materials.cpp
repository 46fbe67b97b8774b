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

#include "terasim/errors.hpp"
#include "terasim/materials.hpp"
#include "terasim/scene.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

using namespace terasim;

// Tiny synthetic grid with distinct corner values; the trilinear oracle
// below is computed by hand from these numbers.
static MaterialProfile box_profile()
{
    MaterialProfile p;
    p.name = "box";
    p.incidence_deg = {0.0, 90.0};
    p.observation_deg = {0.0, 90.0};
    p.frequency_ghz = {100.0, 200.0};
    p.energy = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8}; // [i][o][f], f fastest
    return p;
}

TEST_CASE("trilinear interpolation reproduces grid nodes exactly")
{
    MaterialProfile p = box_profile();
    for (size_t i = 0; i < 2; ++i)
        for (size_t o = 0; o < 2; ++o)
            for (size_t f = 0; f < 2; ++f)
                CHECK(energy_fraction(p, p.incidence_deg[i], p.observation_deg[o],
                                      p.frequency_ghz[f]) == p.at(i, o, f));
}

TEST_CASE("trilinear interpolation matches the hand-computed cell midpoint")
{
    MaterialProfile p = box_profile();
    // Midpoint of every axis: average of all eight corners = 0.45.
    CHECK(energy_fraction(p, 45.0, 45.0, 150.0) == doctest::Approx(0.45).epsilon(1e-12));
    // Interpolate along frequency only.
    CHECK(energy_fraction(p, 0.0, 0.0, 150.0) == doctest::Approx(0.15).epsilon(1e-12));
    // Along incidence only, quarter point: 0.1 + 0.25 * (0.5 - 0.1).
    CHECK(energy_fraction(p, 22.5, 0.0, 100.0) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("angles clamp to the grid edge, frequencies throw outside the span")
{
    MaterialProfile p = box_profile();
    CHECK(energy_fraction(p, -5.0, 0.0, 100.0) == energy_fraction(p, 0.0, 0.0, 100.0));
    CHECK(energy_fraction(p, 95.0, 0.0, 100.0) == energy_fraction(p, 90.0, 0.0, 100.0));
    CHECK_THROWS_WITH_AS(energy_fraction(p, 0.0, 0.0, 99.0), doctest::Contains("box"),
                         ValidationError);
    CHECK_THROWS_AS(energy_fraction(p, 0.0, 0.0, 200.5), ValidationError);
}

TEST_CASE("bracket_axis clamps and brackets")
{
    const std::vector<double> axis{0.0, 1.0, 4.0};
    CHECK(bracket_axis(axis, -1.0) == std::pair<size_t, double>{0, 0.0});
    CHECK(bracket_axis(axis, 0.0) == std::pair<size_t, double>{0, 0.0});
    auto [idx, t] = bracket_axis(axis, 2.5);
    CHECK(idx == 1);
    CHECK(t == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(bracket_axis(axis, 9.0).first == 1); // clamped to the last cell
    CHECK(bracket_axis(axis, 9.0).second == 1.0);
}

TEST_CASE("parametric profile peaks at the mirror direction")
{
    std::vector<ParametricLobe> lobes{{100.0, 0.9, 12.0, 0.001}, {300.0, 0.8, 12.0, 0.001}};
    MaterialProfile p = parametric_profile("shiny", lobes, 1.5);

    CHECK(p.frequency_ghz == std::vector<double>{100.0, 300.0});
    CHECK(p.incidence_deg.front() == 0.0);
    CHECK(p.incidence_deg.back() == 90.0);

    // At a grid node with observation == incidence the lobe is at its peak.
    CHECK(energy_fraction(p, 45.0, 45.0, 100.0) == doctest::Approx(0.901).epsilon(1e-9));
    CHECK(energy_fraction(p, 45.0, 45.0, 300.0) == doctest::Approx(0.801).epsilon(1e-9));
    // Mid frequency: linear blend of the anchors, exact because the frequency
    // axis consists of the anchors themselves.
    CHECK(energy_fraction(p, 45.0, 45.0, 200.0) == doctest::Approx(0.851).epsilon(1e-9));
    // Far off the mirror direction only the floor remains.
    CHECK(energy_fraction(p, 0.0, 90.0, 100.0) == doctest::Approx(0.001).epsilon(1e-6));
    // One lobe width away (57 = 45 + 12, a grid node at step 1.5) the lobe
    // has fallen to 1/e of its amplitude.
    CHECK(energy_fraction(p, 45.0, 57.0, 100.0) ==
          doctest::Approx(0.9 * std::exp(-1.0) + 0.001).epsilon(1e-6));

    // Amplitude plus floor above 1 is rejected.
    std::vector<ParametricLobe> bad{{100.0, 0.9999, 10.0, 0.01}};
    CHECK_THROWS_AS(parametric_profile("bad", bad), ValidationError);
}

TEST_CASE("interpolation stays inside [0, 1] for every default material")
{
    MaterialLibrary lib = MaterialLibrary::load_defaults(default_data_dir() / "materials/defaults.json");
    REQUIRE(lib.profiles.size() == 5);
    std::mt19937 rng(4242u);
    for (const auto &[name, profile] : lib.profiles)
    {
        std::uniform_real_distribution<double> ang(-10.0, 100.0);
        std::uniform_real_distribution<double> freq(profile.min_frequency_ghz(),
                                                    profile.max_frequency_ghz());
        for (int n = 0; n < 10000; ++n)
        {
            const double e = energy_fraction(profile, ang(rng), ang(rng), freq(rng));
            REQUIRE(e >= 0.0);
            REQUIRE(e <= 1.0);
        }
    }
}

TEST_CASE("default library covers the office palette and orders materials")
{
    MaterialLibrary lib = MaterialLibrary::load_defaults(default_data_dir() / "materials/defaults.json");
    for (const char *name : {"aluminium", "glass", "plastic", "hardboard", "concrete"})
        CHECK(lib.contains(name));

    // Metal stays strongly specular at 3 THz while concrete scatters.
    const double alu = energy_fraction(lib.get("aluminium"), 45.0, 45.0, 3000.0);
    const double con = energy_fraction(lib.get("concrete"), 45.0, 45.0, 3000.0);
    CHECK(alu > 0.9);
    CHECK(con < 0.01);
    CHECK(alu > con);

    // The band used by both presets is inside every profile's span.
    for (const auto &[name, profile] : lib.profiles)
    {
        CHECK(profile.min_frequency_ghz() <= 275.0);
        CHECK(profile.max_frequency_ghz() >= 3025.0);
    }

    CHECK_THROWS_WITH_AS(lib.get("marble"), doctest::Contains("aluminium"), ValidationError);
}

TEST_CASE("profile CSV parser reports the offending row")
{
    const std::string header = "incidence_deg,observation_deg,frequency_ghz,energy_fraction\n";

    std::istringstream bad_header("a,b,c,d\n0,0,100,0.5\n");
    CHECK_THROWS_WITH_AS(parse_profile_csv(bad_header, "bad"), doctest::Contains("row 1"),
                         ValidationError);

    std::istringstream out_of_range(header + "0,0,100,0.5\n0,0,200,1.5\n");
    CHECK_THROWS_WITH_AS(parse_profile_csv(out_of_range, "bad"), doctest::Contains("row 3"),
                         ValidationError);

    std::istringstream duplicate(header + "0,0,100,0.5\n0,0,100,0.4\n");
    CHECK_THROWS_WITH_AS(parse_profile_csv(duplicate, "bad"), doctest::Contains("duplicate"),
                         ValidationError);

    // 2x1x2 grid missing the (90, 0, 200) sample.
    std::istringstream incomplete(header + "0,0,100,0.5\n0,0,200,0.5\n90,0,100,0.5\n");
    CHECK_THROWS_WITH_AS(parse_profile_csv(incomplete, "bad"), doctest::Contains("missing"),
                         ValidationError);

    std::istringstream junk(header + "0,0,100,abc\n");
    CHECK_THROWS_AS(parse_profile_csv(junk, "bad"), ValidationError);
}

TEST_CASE("profile CSV writer round-trips through the parser")
{
    std::vector<ParametricLobe> lobes{{100.0, 0.7, 12.0, 0.002}, {200.0, 0.6, 12.0, 0.002}};
    MaterialProfile p = parametric_profile("rt", lobes, 7.5);

    std::ostringstream out;
    write_profile_csv(p, out);
    std::istringstream in(out.str());
    MaterialProfile q = parse_profile_csv(in, "rt");

    REQUIRE(q.incidence_deg == p.incidence_deg);
    REQUIRE(q.observation_deg == p.observation_deg);
    REQUIRE(q.frequency_ghz == p.frequency_ghz);
    REQUIRE(q.energy.size() == p.energy.size());
    // Serialization keeps 6 significant digits.
    for (size_t k = 0; k < p.energy.size(); ++k)
        CHECK(q.energy[k] == doctest::Approx(p.energy[k]).epsilon(1e-5));
}

TEST_CASE("profile validation rejects broken grids")
{
    MaterialProfile p = box_profile();
    CHECK_NOTHROW(p.validate());

    MaterialProfile bad = p;
    bad.energy[3] = 1.2;
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    bad = p;
    bad.incidence_deg = {90.0, 0.0};
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    bad = p;
    bad.energy.pop_back();
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    bad = p;
    bad.incidence_deg = {0.0, 95.0};
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

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

#include "terasim/propagation.hpp"
#include "terasim/vec3.hpp"

#include <filesystem>
#include <set>
#include <string>
#include <vector>

namespace terasim
{

// Planar parallelogram reflector. The active side is the one the unit normal
// (edge_u x edge_v, normalized) points toward; energy only leaves that side.
struct Surface
{
    std::string id;
    Vec3 corner;
    Vec3 edge_u;
    Vec3 edge_v;
    std::string material;
    std::string name;

    double area() const { return edge_u.cross(edge_v).norm(); }
    Vec3 unit_normal() const { return edge_u.cross(edge_v).normalized(); }

    void validate() const;
};

// Opaque axis-aligned box; any path crossing its interior is discarded.
struct Obstacle
{
    std::string label;
    Vec3 min_corner;
    Vec3 max_corner;

    void validate() const;
};

enum class NodeRole
{
    transmitter,
    receiver
};

struct Node
{
    std::string id;
    Vec3 position;
    AntennaSpec antenna;
    NodeRole role = NodeRole::receiver;
};

// One tessellation cell of a surface, treated as a point re-radiator.
struct Segment
{
    Vec3 center;
    Vec3 normal;
    double area = 0.0;
    std::string surface_id;
};

struct Scene
{
    Vec3 room_dims{6.0, 4.0, 3.0};
    std::vector<Surface> surfaces;
    std::vector<Obstacle> obstacles;
    std::vector<Node> nodes;

    void validate() const;

    const Surface &surface_by_id(const std::string &id) const;
    // Requires exactly one node with the given role.
    const Node &node_by_role(NodeRole role) const;

    static Scene load_json(const std::filesystem::path &path);
};

// Tiles the surface into a grid of segments, ceil(|edge_u|/s) by
// ceil(|edge_v|/s). Edge cells at non-divisible sizes are shrunk, never
// dropped, so the areas sum exactly to the surface area.
std::vector<Segment> tessellate(const Surface &surface, double segment_size_m);

// True iff the open segment (a, b) crosses any obstacle box interior or any
// surface not listed in `ignore`. Tangent grazes do not count (open-set
// convention), so legs that merely start or end on a surface stay clear.
bool is_occluded(const Vec3 &a, const Vec3 &b, const Scene &scene,
                 const std::set<std::string> &ignore = {});

// Open-interval crossing predicates behind is_occluded, exposed for the
// tracing kernels which filter surfaces by index instead of id.
bool segment_crosses_box(const Vec3 &a, const Vec3 &b, const Vec3 &box_min, const Vec3 &box_max);
bool segment_crosses_surface(const Vec3 &a, const Vec3 &b, const Surface &surface);

// Loads the office scene shipped with the tool and applies the antenna
// calibration of the named scenario preset ("ieee" or "thz") to its nodes.
Scene build_office_scene(const std::string &preset,
                         const std::filesystem::path &data_dir);

// Data directory resolution: TERASIM_DATA environment variable when set,
// otherwise the install-time default.
std::filesystem::path default_data_dir();

} // namespace terasim

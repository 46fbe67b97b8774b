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

#include "terasim/scene.hpp"

#include "terasim/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>

namespace terasim
{

namespace
{

void require(bool ok, const std::string &msg)
{
    if (!ok)
        throw ValidationError(msg);
}

bool inside_room(const Vec3 &p, const Vec3 &dims, double tol = 1e-9)
{
    return p.x >= -tol && p.x <= dims.x + tol && p.y >= -tol && p.y <= dims.y + tol &&
           p.z >= -tol && p.z <= dims.z + tol;
}

} // namespace

// Open-interval intersection of segment a + t*(b-a), t in (0,1), with the
// interior of an axis-aligned box (slab method, strict inequalities).
bool segment_crosses_box(const Vec3 &a, const Vec3 &b, const Vec3 &lo, const Vec3 &hi)
{
    double tmin = 0.0;
    double tmax = 1.0;
    const double av[3] = {a.x, a.y, a.z};
    const double bv[3] = {b.x, b.y, b.z};
    const double lov[3] = {lo.x, lo.y, lo.z};
    const double hiv[3] = {hi.x, hi.y, hi.z};
    for (int axis = 0; axis < 3; ++axis)
    {
        double o = av[axis];
        double d = bv[axis] - av[axis];
        if (d == 0.0)
        {
            if (o <= lov[axis] || o >= hiv[axis])
                return false;
            continue;
        }
        double t1 = (lov[axis] - o) / d;
        double t2 = (hiv[axis] - o) / d;
        if (t1 > t2)
            std::swap(t1, t2);
        tmin = std::max(tmin, t1);
        tmax = std::min(tmax, t2);
        if (tmin >= tmax)
            return false;
    }
    return tmin < tmax;
}

// Open-interval intersection with the interior of a parallelogram.
bool segment_crosses_surface(const Vec3 &a, const Vec3 &b, const Surface &s)
{
    Vec3 n = s.edge_u.cross(s.edge_v);
    Vec3 d = b - a;
    double denom = d.dot(n);
    if (denom == 0.0)
        return false;
    double t = (s.corner - a).dot(n) / denom;
    if (t <= 0.0 || t >= 1.0)
        return false;
    Vec3 p = a + d * t - s.corner;
    double uu = s.edge_u.dot(s.edge_u);
    double vv = s.edge_v.dot(s.edge_v);
    double uv = s.edge_u.dot(s.edge_v);
    double pu = p.dot(s.edge_u);
    double pv = p.dot(s.edge_v);
    double det = uu * vv - uv * uv;
    double su = (pu * vv - pv * uv) / det;
    double sv = (pv * uu - pu * uv) / det;
    return su > 0.0 && su < 1.0 && sv > 0.0 && sv < 1.0;
}

namespace
{

Vec3 parse_vec3(const nlohmann::json &j, const std::string &ctx)
{
    if (!j.is_array() || j.size() != 3)
        throw ValidationError(ctx + ": expected an array of 3 numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

AntennaSpec parse_antenna(const nlohmann::json &j)
{
    AntennaSpec a;
    a.boresight_gain_dbi = j.at("boresight_gain_dbi").get<double>();
    a.half_beamwidth_deg = j.at("half_beamwidth_deg").get<double>();
    a.floor_gain_dbi = j.at("floor_gain_dbi").get<double>();
    a.validate();
    return a;
}

} // namespace

void Surface::validate() const
{
    require(!id.empty(), "surface: empty id");
    require(!material.empty(), "surface '" + id + "': empty material");
    double a = edge_u.cross(edge_v).norm();
    double scale = edge_u.norm() * edge_v.norm();
    require(scale > 0.0 && a > 1e-12 * scale,
            "surface '" + id + "': degenerate geometry (edges collinear or zero)");
}

void Obstacle::validate() const
{
    require(min_corner.x < max_corner.x && min_corner.y < max_corner.y &&
                min_corner.z < max_corner.z,
            "obstacle '" + label + "': min corner must be strictly below max corner");
}

void Scene::validate() const
{
    require(room_dims.x > 0.0 && room_dims.y > 0.0 && room_dims.z > 0.0,
            "scene: room dimensions must be positive");
    std::set<std::string> ids;
    for (const Surface &s : surfaces)
    {
        s.validate();
        require(ids.insert(s.id).second, "scene: duplicate surface id '" + s.id + "'");
        for (const Vec3 &p : {s.corner, s.corner + s.edge_u, s.corner + s.edge_v,
                              s.corner + s.edge_u + s.edge_v})
            require(inside_room(p, room_dims),
                    "surface '" + s.id + "': extends outside the room");
    }
    for (const Obstacle &o : obstacles)
    {
        o.validate();
        require(inside_room(o.min_corner, room_dims) && inside_room(o.max_corner, room_dims),
                "obstacle '" + o.label + "': extends outside the room");
    }
    for (const Node &n : nodes)
    {
        n.antenna.validate();
        require(inside_room(n.position, room_dims),
                "node '" + n.id + "': position outside the room");
    }
}

const Surface &Scene::surface_by_id(const std::string &id) const
{
    for (const Surface &s : surfaces)
        if (s.id == id)
            return s;
    throw ValidationError("scene: no surface with id '" + id + "'");
}

const Node &Scene::node_by_role(NodeRole role) const
{
    const Node *found = nullptr;
    for (const Node &n : nodes)
        if (n.role == role)
        {
            if (found)
                throw ValidationError("scene: multiple nodes share a role");
            found = &n;
        }
    if (!found)
        throw ValidationError(std::string("scene: no ") +
                              (role == NodeRole::transmitter ? "transmitter" : "receiver") +
                              " node");
    return *found;
}

std::vector<Segment> tessellate(const Surface &surface, double segment_size_m)
{
    surface.validate();
    require(segment_size_m > 0.0, "tessellate: segment size must be positive");
    double lu = surface.edge_u.norm();
    double lv = surface.edge_v.norm();
    // The epsilon keeps exact divisors from producing a sliver column when the
    // quotient lands one ulp above an integer.
    int nu = std::max(1, static_cast<int>(std::ceil(lu / segment_size_m - 1e-12)));
    int nv = std::max(1, static_cast<int>(std::ceil(lv / segment_size_m - 1e-12)));
    Vec3 normal = surface.unit_normal();
    double full_area = surface.area();

    std::vector<Segment> out;
    out.reserve(static_cast<size_t>(nu) * static_cast<size_t>(nv));
    for (int i = 0; i < nu; ++i)
    {
        double u0 = segment_size_m * static_cast<double>(i);
        double wu = std::min(segment_size_m, lu - u0);
        double cu = (u0 + wu / 2.0) / lu;
        for (int j = 0; j < nv; ++j)
        {
            double v0 = segment_size_m * static_cast<double>(j);
            double wv = std::min(segment_size_m, lv - v0);
            double cv = (v0 + wv / 2.0) / lv;
            Segment seg;
            seg.center = surface.corner + surface.edge_u * cu + surface.edge_v * cv;
            seg.normal = normal;
            seg.area = full_area * (wu / lu) * (wv / lv);
            seg.surface_id = surface.id;
            out.push_back(seg);
        }
    }
    return out;
}

bool is_occluded(const Vec3 &a, const Vec3 &b, const Scene &scene,
                 const std::set<std::string> &ignore)
{
    for (const Obstacle &o : scene.obstacles)
        if (segment_crosses_box(a, b, o.min_corner, o.max_corner))
            return true;
    for (const Surface &s : scene.surfaces)
        if (!ignore.count(s.id) && segment_crosses_surface(a, b, s))
            return true;
    return false;
}

Scene Scene::load_json(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open scene file: " + path.string());
    nlohmann::json doc;
    try
    {
        in >> doc;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ValidationError(path.string() + ": " + e.what());
    }

    Scene scene;
    try
    {
        if (doc.value("version", 0) != 1)
            throw ValidationError(path.string() + ": unsupported or missing version (expected 1)");
        scene.room_dims = parse_vec3(doc.at("room").at("dims"), path.string() + ": room.dims");
        for (const auto &js : doc.value("surfaces", nlohmann::json::array()))
        {
            Surface s;
            s.id = js.at("id").get<std::string>();
            s.corner = parse_vec3(js.at("corner"), "surface '" + s.id + "': corner");
            s.edge_u = parse_vec3(js.at("edge_u"), "surface '" + s.id + "': edge_u");
            s.edge_v = parse_vec3(js.at("edge_v"), "surface '" + s.id + "': edge_v");
            s.material = js.at("material").get<std::string>();
            s.name = js.value("name", s.id);
            scene.surfaces.push_back(s);
        }
        for (const auto &jo : doc.value("obstacles", nlohmann::json::array()))
        {
            Obstacle o;
            o.label = jo.value("label", std::string("obstacle"));
            o.min_corner = parse_vec3(jo.at("min"), "obstacle '" + o.label + "': min");
            o.max_corner = parse_vec3(jo.at("max"), "obstacle '" + o.label + "': max");
            scene.obstacles.push_back(o);
        }
        for (const auto &jn : doc.value("nodes", nlohmann::json::array()))
        {
            Node n;
            n.id = jn.at("id").get<std::string>();
            n.position = parse_vec3(jn.at("position"), "node '" + n.id + "': position");
            std::string role = jn.at("role").get<std::string>();
            if (role == "transmitter")
                n.role = NodeRole::transmitter;
            else if (role == "receiver")
                n.role = NodeRole::receiver;
            else
                throw ValidationError("node '" + n.id + "': unknown role '" + role + "'");
            if (jn.contains("antenna"))
                n.antenna = parse_antenna(jn.at("antenna"));
            scene.nodes.push_back(n);
        }
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ValidationError(path.string() + ": " + e.what());
    }
    scene.validate();
    return scene;
}

Scene build_office_scene(const std::string &preset, const std::filesystem::path &data_dir)
{
    if (preset != "ieee" && preset != "thz")
        throw ValidationError("unknown scenario preset '" + preset + "' (expected ieee or thz)");
    Scene scene = Scene::load_json(data_dir / "scenes" / "office.json");

    std::filesystem::path radio_path = data_dir / "radio" / (preset + ".json");
    std::ifstream in(radio_path);
    if (!in)
        throw IoError("cannot open radio preset: " + radio_path.string());
    nlohmann::json doc;
    try
    {
        in >> doc;
        const auto &ant = doc.at("antennas");
        for (Node &n : scene.nodes)
        {
            const char *key = n.role == NodeRole::transmitter ? "plug" : "laptop";
            n.antenna = parse_antenna(ant.at(key));
        }
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ValidationError(radio_path.string() + ": " + e.what());
    }
    scene.validate();
    return scene;
}

std::filesystem::path default_data_dir()
{
    if (const char *env = std::getenv("TERASIM_DATA"))
        return env;
    return TERASIM_DATA_DIR;
}

} // namespace terasim

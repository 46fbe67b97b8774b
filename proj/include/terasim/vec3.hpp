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

namespace terasim
{

struct Vec3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 operator+(const Vec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }

    constexpr double dot(const Vec3 &o) const { return x * o.x + y * o.y + z * o.z; }

    constexpr Vec3 cross(const Vec3 &o) const
    {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }

    double norm() const { return std::sqrt(dot(*this)); }

    Vec3 normalized() const
    {
        double n = norm();
        return {x / n, y / n, z / n};
    }

    constexpr bool operator==(const Vec3 &o) const = default;
};

constexpr Vec3 operator*(double s, const Vec3 &v) { return v * s; }

inline double distance(const Vec3 &a, const Vec3 &b) { return (b - a).norm(); }

// Angle between two vectors in degrees, clamped against rounding outside [-1, 1].
inline double angle_between_deg(const Vec3 &a, const Vec3 &b)
{
    double c = a.dot(b) / (a.norm() * b.norm());
    if (c > 1.0)
        c = 1.0;
    if (c < -1.0)
        c = -1.0;
    return std::acos(c) * 180.0 / 3.14159265358979323846;
}

} // namespace terasim

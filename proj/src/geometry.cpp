// SPDX-License-Identifier: Apache-2.0
//
// xlmimo: near-field multi-user XL-MIMO channel and beamforming simulation
// Copyright (C) 2026 The xlmimo authors
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

#include "xlmimo/geometry.hpp"
#include "xlmimo/errors.hpp"

#include <bit>
#include <string>

namespace xlmimo
{
    namespace
    {
        bool on_grid(double offset, std::size_t count)
        {
            const double t = offset + 0.5 * double(count - 1);
            return std::isfinite(t) && t >= 0.0 && t <= double(count - 1) && t == std::floor(t);
        }

        void fnv_mix(std::uint64_t &h, std::uint64_t word)
        {
            for (int i = 0; i < 8; ++i)
            {
                h ^= (word >> (8 * i)) & 0xffu;
                h *= 0x100000001b3ull;
            }
        }
    }

    ArrayGeometry::ArrayGeometry(std::size_t count_y, std::size_t count_z, double spacing, double element_area,
                                 double wavelength)
        : count_y_(count_y), count_z_(count_z), spacing_(spacing), area_(element_area), wavelength_(wavelength)
    {
        if (count_y == 0 || count_z == 0)
            throw invalid_argument("Element counts must be at least 1.");
        if (!(spacing > 0.0) || !std::isfinite(spacing))
            throw invalid_argument("Element spacing must be positive and finite.");
        if (!(element_area > 0.0) || !std::isfinite(element_area))
            throw invalid_argument("Element area must be positive and finite.");
        if (!(wavelength > 0.0) || !std::isfinite(wavelength))
            throw invalid_argument("Wavelength must be positive and finite.");
        if (element_area > spacing * spacing)
            throw invalid_argument("Elements overlap: spacing " + std::to_string(spacing) +
                                   " m is smaller than the element side sqrt(" + std::to_string(element_area) + ").");
    }

    ArrayGeometry ArrayGeometry::with_default_elements(std::size_t count_y, std::size_t count_z, double wavelength)
    {
        return ArrayGeometry(count_y, count_z, 0.5 * wavelength,
                             wavelength * wavelength / (4.0 * std::numbers::pi), wavelength);
    }

    ArrayGeometry ArrayGeometry::resized(std::size_t count_y, std::size_t count_z) const
    {
        return ArrayGeometry(count_y, count_z, spacing_, area_, wavelength_);
    }

    std::uint64_t ArrayGeometry::digest() const
    {
        std::uint64_t h = 0xcbf29ce484222325ull; // FNV-1a
        fnv_mix(h, count_y_);
        fnv_mix(h, count_z_);
        fnv_mix(h, std::bit_cast<std::uint64_t>(spacing_));
        fnv_mix(h, std::bit_cast<std::uint64_t>(area_));
        fnv_mix(h, std::bit_cast<std::uint64_t>(wavelength_));
        return h;
    }

    UserLocation::UserLocation(double distance, double theta, double phi)
        : distance_(distance), theta_(theta), phi_(phi)
    {
        constexpr double pi = std::numbers::pi;
        if (!(distance > 0.0) || !std::isfinite(distance))
            throw invalid_argument("User distance must be positive and finite.");
        if (!(theta >= 0.0 && theta <= pi))
            throw invalid_argument("Zenith angle must lie in [0, pi], got " + std::to_string(theta) + ".");
        if (!(phi >= -0.5 * pi && phi <= 0.5 * pi))
            throw invalid_argument("Azimuth angle must lie in [-pi/2, pi/2], got " + std::to_string(phi) + ".");

        const double st = std::sin(theta);
        dir_x_ = st * std::cos(phi);
        dir_y_ = st * std::sin(phi);
        dir_z_ = std::cos(theta);
    }

    Vector3 element_position(const ArrayGeometry &geom, double m_y, double m_z)
    {
        if (!on_grid(m_y, geom.count_y()))
            throw index_range_error("Element offset m_y = " + std::to_string(m_y) + " is not on the " +
                                    std::to_string(geom.count_y()) + "-element grid.");
        if (!on_grid(m_z, geom.count_z()))
            throw index_range_error("Element offset m_z = " + std::to_string(m_z) + " is not on the " +
                                    std::to_string(geom.count_z()) + "-element grid.");
        return {0.0, m_y * geom.spacing(), m_z * geom.spacing()};
    }

    Vector3 user_position(const UserLocation &loc)
    {
        const double r = loc.distance();
        return {r * loc.dir_x(), r * loc.dir_y(), r * loc.dir_z()};
    }

    UserLocation cartesian_to_spherical(const Vector3 &p)
    {
        const double r = p.norm();
        if (!(r > 0.0))
            throw degenerate_geometry("Cannot place a user at the array center.");
        if (p.x < 0.0)
            throw degenerate_geometry("Point lies behind the array (x < 0).");

        const double rho = std::hypot(p.x, p.y);
        const double theta = std::atan2(rho, p.z);
        const double phi = rho > 0.0 ? std::atan2(p.y, p.x) : 0.0;
        return UserLocation(r, theta, phi);
    }

    double normalized_distance_squared(const ArrayGeometry &geom, const UserLocation &loc, double m_y, double m_z)
    {
        const double eps = geom.spacing() / loc.distance();
        const double s = 1.0 - 2.0 * eps * (m_y * loc.dir_y() + m_z * loc.dir_z()) + (m_y * m_y + m_z * m_z) * eps * eps;
        if (!(s > 0.0))
            throw degenerate_geometry("User coincides with an array element.");
        return s;
    }

    double element_distance(const ArrayGeometry &geom, const UserLocation &loc, double m_y, double m_z)
    {
        return loc.distance() * std::sqrt(normalized_distance_squared(geom, loc, m_y, m_z));
    }
}

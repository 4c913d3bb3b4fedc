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

#ifndef XLMIMO_GEOMETRY_HPP
#define XLMIMO_GEOMETRY_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>

namespace xlmimo
{
    // Default carrier wavelength in meters (half-wavelength spacing of 0.0628 m)
    inline constexpr double kDefaultWavelength = 0.1256;

    struct Vector3
    {
        double x = 0.0; // meters
        double y = 0.0;
        double z = 0.0;

        friend Vector3 operator-(const Vector3 &a, const Vector3 &b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
        friend bool operator==(const Vector3 &, const Vector3 &) = default;
        double dot(const Vector3 &o) const { return x * o.x + y * o.y + z * o.z; }
        double norm() const { return std::hypot(x, y, z); }
    };

    // Uniform planar array on the y-z plane, centered at the origin, facing +x.
    //
    // Elements sit on a regular grid with spacing d. Element offsets along each axis are
    // m = i - (count - 1) / 2 for i = 0 .. count-1, so odd counts give the integer set
    // {0, +-1, ..., +-(count-1)/2} and even counts give half-integers. Offsets are always
    // symmetric about the center.
    class ArrayGeometry
    {
    public:
        // Throws invalid_argument unless counts >= 1, spacing >= sqrt(area) and all lengths > 0
        ArrayGeometry(std::size_t count_y, std::size_t count_z, double spacing, double element_area, double wavelength);

        // Half-wavelength spacing and element area lambda^2 / (4 pi)
        static ArrayGeometry with_default_elements(std::size_t count_y, std::size_t count_z,
                                                   double wavelength = kDefaultWavelength);

        std::size_t count_y() const { return count_y_; }
        std::size_t count_z() const { return count_z_; }
        std::size_t size() const { return count_y_ * count_z_; } // M
        double spacing() const { return spacing_; }              // d
        double element_area() const { return area_; }            // A
        double wavelength() const { return wavelength_; }        // lambda
        double occupation_ratio() const { return area_ / (spacing_ * spacing_); }
        double spacing_wavelengths() const { return spacing_ / wavelength_; }
        double length_y() const { return double(count_y_) * spacing_; }
        double length_z() const { return double(count_z_) * spacing_; }

        // Centered offset of the i-th element along y (resp. z), in units of d
        double offset_y(std::size_t i) const { return double(i) - 0.5 * double(count_y_ - 1); }
        double offset_z(std::size_t i) const { return double(i) - 0.5 * double(count_z_ - 1); }
        double max_offset_y() const { return 0.5 * double(count_y_ - 1); }
        double max_offset_z() const { return 0.5 * double(count_z_ - 1); }

        // Same array with a different element count (used by the sweeps)
        ArrayGeometry resized(std::size_t count_y, std::size_t count_z) const;

        // Identifier of the full parameter set; vectors built on different arrays never compare equal
        std::uint64_t digest() const;

        friend bool operator==(const ArrayGeometry &, const ArrayGeometry &) = default;

    private:
        std::size_t count_y_;
        std::size_t count_z_;
        double spacing_;
        double area_;
        double wavelength_;
    };

    // User position in spherical coordinates relative to the array center.
    // theta is the zenith angle from +z, phi the azimuth from +x towards +y.
    class UserLocation
    {
    public:
        // Throws invalid_argument unless r > 0, theta in [0, pi], phi in [-pi/2, pi/2]
        UserLocation(double distance, double theta, double phi);

        double distance() const { return distance_; }
        double theta() const { return theta_; }
        double phi() const { return phi_; }

        // Direction cosines: dir_x = sin(theta) cos(phi), dir_y = sin(theta) sin(phi), dir_z = cos(theta)
        double dir_x() const { return dir_x_; }
        double dir_y() const { return dir_y_; }
        double dir_z() const { return dir_z_; }

    private:
        double distance_;
        double theta_;
        double phi_;
        double dir_x_;
        double dir_y_;
        double dir_z_;
    };

    // Center of the element at offsets (m_y, m_z): (0, m_y d, m_z d).
    // Throws index_range_error when an offset is off the array grid.
    Vector3 element_position(const ArrayGeometry &geom, double m_y, double m_z);

    Vector3 user_position(const UserLocation &loc);

    // Inverse of user_position. Points on the z-axis get phi = 0.
    // Throws degenerate_geometry for the origin or for points behind the array (x < 0).
    UserLocation cartesian_to_spherical(const Vector3 &p);

    // Squared element-to-user distance normalized by r^2:
    //   1 - 2 m_y eps dir_y - 2 m_z eps dir_z + (m_y^2 + m_z^2) eps^2, eps = d / r
    // Throws degenerate_geometry if it is not strictly positive.
    double normalized_distance_squared(const ArrayGeometry &geom, const UserLocation &loc, double m_y, double m_z);

    // Exact distance between the user and the element center, in meters
    double element_distance(const ArrayGeometry &geom, const UserLocation &loc, double m_y, double m_z);

    // d / r; small values mean the user is many element spacings away
    inline double spacing_to_distance_ratio(const ArrayGeometry &geom, const UserLocation &loc)
    {
        return geom.spacing() / loc.distance();
    }
}

#endif

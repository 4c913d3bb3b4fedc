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

#ifndef XLMIMO_CHANNEL_HPP
#define XLMIMO_CHANNEL_HPP

#include "xlmimo/geometry.hpp"
#include "xlmimo/numerics.hpp"

#include <cstdint>
#include <string_view>

namespace xlmimo
{
    enum class ChannelModel
    {
        pnusw, // spherical wavefront with per-element amplitude and projected aperture
        upw    // far-field uniform plane wave
    };

    std::string_view to_string(ChannelModel model);

    // Channel vector of one user. Entries are flattened with m_z as the outer and m_y as the
    // inner index: entry (iy, iz) lives at iz * count_y + iy.
    struct ResponseVector
    {
        numerics::cvec entries;
        ChannelModel model = ChannelModel::pnusw;
        std::uint64_t geometry = 0; // ArrayGeometry::digest() of the array it was built for

        std::size_t size() const { return entries.size(); }
    };

    inline std::size_t flat_index(const ArrayGeometry &geom, std::size_t iy, std::size_t iz)
    {
        return iz * geom.count_y() + iy;
    }

    // Plane-wave channel power at the 1 m reference distance
    struct UpwConfig
    {
        double beta0 = 0.0;

        // beta0 = A / (4 pi): the projected-aperture gain of the center element seen from
        // 1 m at boresight, so both models agree there
        static UpwConfig matching(const ArrayGeometry &geom);
    };

    // Power gain between the user and element (m_y, m_z):
    //   xi eps^2 dir_x / (4 pi s^{3/2}),  s = normalized_distance_squared
    // Zero when the user lies in the array plane.
    double pnusw_gain(const ArrayGeometry &geom, const UserLocation &loc, double m_y, double m_z);

    // Entries sqrt(gain) * exp(-j 2 pi r_elem / lambda)
    ResponseVector pnusw_response(const ArrayGeometry &geom, const UserLocation &loc);

    // Entries sqrt(beta0) / r * exp(-j 2 pi r / lambda) * exp(+j 2 pi (m_y d dir_y + m_z d dir_z) / lambda)
    ResponseVector upw_response(const ArrayGeometry &geom, const UserLocation &loc, const UpwConfig &cfg);

    ResponseVector response(ChannelModel model, const ArrayGeometry &geom, const UserLocation &loc,
                            const UpwConfig &cfg);

    // ||a||^2
    double channel_power(const ResponseVector &a);

    // |a^H b|^2 / (||a||^2 ||b||^2), clamped to [0, 1].
    // Throws dimension_error for vectors of different arrays, degenerate_channel for zero power.
    double correlation(const ResponseVector &a, const ResponseVector &b);

    // Plane-wave correlation as a product of squared Dirichlet kernels in the direction-cosine
    // differences. Exactly aligned directions (grating lobes included) take the limit value.
    double upw_correlation_closed(const ArrayGeometry &geom, const UserLocation &a, const UserLocation &b);
}

#endif

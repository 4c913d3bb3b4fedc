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

#include "xlmimo/channel.hpp"
#include "xlmimo/errors.hpp"

#include <algorithm>
#include <cmath>

namespace xlmimo
{
    namespace
    {
        constexpr double two_pi = 2.0 * std::numbers::pi;

        // exp(-j 2 pi cycles), with the integer part of the cycle count removed first
        numerics::cplx unit_phasor(double cycles)
        {
            const double frac = cycles - std::round(cycles);
            return {std::cos(two_pi * frac), -std::sin(two_pi * frac)};
        }

        // |sin(pi n x) / sin(pi x)| for integer n, with the removable singularity filled in
        double dirichlet_magnitude(std::size_t n, double x)
        {
            // sin(pi n (k + t)) = +-sin(pi n t) for integer k, so only the offset t matters
            const double t = x - std::round(x);
            if (std::abs(t) < 1e-12)
                return double(n);
            return std::abs(std::sin(std::numbers::pi * double(n) * t) / std::sin(std::numbers::pi * t));
        }
    }

    std::string_view to_string(ChannelModel model)
    {
        return model == ChannelModel::pnusw ? "pnusw" : "upw";
    }

    UpwConfig UpwConfig::matching(const ArrayGeometry &geom)
    {
        return {geom.element_area() / (4.0 * std::numbers::pi)};
    }

    double pnusw_gain(const ArrayGeometry &geom, const UserLocation &loc, double m_y, double m_z)
    {
        const double eps = spacing_to_distance_ratio(geom, loc);
        const double s = normalized_distance_squared(geom, loc, m_y, m_z);
        return geom.occupation_ratio() * eps * eps * loc.dir_x() / (4.0 * std::numbers::pi * s * std::sqrt(s));
    }

    ResponseVector pnusw_response(const ArrayGeometry &geom, const UserLocation &loc)
    {
        ResponseVector a{numerics::cvec(geom.size()), ChannelModel::pnusw, geom.digest()};
        const double r_over_lambda = loc.distance() / geom.wavelength();
        for (std::size_t iz = 0; iz < geom.count_z(); ++iz)
        {
            const double mz = geom.offset_z(iz);
            for (std::size_t iy = 0; iy < geom.count_y(); ++iy)
            {
                const double my = geom.offset_y(iy);
                const double s = normalized_distance_squared(geom, loc, my, mz);
                const double eps = spacing_to_distance_ratio(geom, loc);
                const double g = geom.occupation_ratio() * eps * eps * loc.dir_x() /
                                 (4.0 * std::numbers::pi * s * std::sqrt(s));
                a.entries[flat_index(geom, iy, iz)] = std::sqrt(g) * unit_phasor(r_over_lambda * std::sqrt(s));
            }
        }
        return a;
    }

    ResponseVector upw_response(const ArrayGeometry &geom, const UserLocation &loc, const UpwConfig &cfg)
    {
        if (!(cfg.beta0 > 0.0))
            throw invalid_argument("UPW reference gain beta0 must be positive.");
        ResponseVector a{numerics::cvec(geom.size()), ChannelModel::upw, geom.digest()};
        const numerics::cplx common =
            (std::sqrt(cfg.beta0) / loc.distance()) * unit_phasor(loc.distance() / geom.wavelength());
        const double dbar = geom.spacing_wavelengths();
        for (std::size_t iz = 0; iz < geom.count_z(); ++iz)
        {
            const double mz = geom.offset_z(iz);
            for (std::size_t iy = 0; iy < geom.count_y(); ++iy)
            {
                const double my = geom.offset_y(iy);
                // unit_phasor carries the minus sign, so negate to get exp(+j ...)
                const double cycles = -dbar * (my * loc.dir_y() + mz * loc.dir_z());
                a.entries[flat_index(geom, iy, iz)] = common * unit_phasor(cycles);
            }
        }
        return a;
    }

    ResponseVector response(ChannelModel model, const ArrayGeometry &geom, const UserLocation &loc,
                            const UpwConfig &cfg)
    {
        return model == ChannelModel::pnusw ? pnusw_response(geom, loc) : upw_response(geom, loc, cfg);
    }

    double channel_power(const ResponseVector &a)
    {
        return numerics::norm_squared(a.entries);
    }

    double correlation(const ResponseVector &a, const ResponseVector &b)
    {
        if (a.geometry != b.geometry || a.size() != b.size())
            throw dimension_error("correlation: channel vectors belong to different arrays.");
        const double pa = channel_power(a);
        const double pb = channel_power(b);
        if (!(pa > 0.0) || !(pb > 0.0))
            throw degenerate_channel("correlation: zero-power channel vector.");
        const double rho = std::norm(numerics::dot(a.entries, b.entries)) / (pa * pb);
        return std::clamp(rho, 0.0, 1.0);
    }

    double upw_correlation_closed(const ArrayGeometry &geom, const UserLocation &a, const UserLocation &b)
    {
        const double dbar = geom.spacing_wavelengths();
        const double ky = dirichlet_magnitude(geom.count_y(), dbar * (a.dir_y() - b.dir_y())) / double(geom.count_y());
        const double kz = dirichlet_magnitude(geom.count_z(), dbar * (a.dir_z() - b.dir_z())) / double(geom.count_z());
        return std::clamp(ky * ky * kz * kz, 0.0, 1.0);
    }
}

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

#ifndef XLMIMO_EXPERIMENTS_HPP
#define XLMIMO_EXPERIMENTS_HPP

#include "xlmimo/beamforming.hpp"
#include "xlmimo/channel.hpp"
#include "xlmimo/geometry.hpp"

#include <json.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace xlmimo::experiments
{
    // Unit of a metric column. Values are always stored linear; conversion to dB happens only
    // when a result is serialized.
    enum class Unit
    {
        linear,
        db,
        bpshz
    };

    std::string_view suffix(Unit unit);

    struct Column
    {
        std::string name; // "<model>_<scheme>_<metric>" without the unit suffix
        Unit unit = Unit::linear;

        std::string full_name() const { return name + "_" + std::string(suffix(unit)); }
    };

    // Tabular sweep output: one row per sweep point (or heat-map cell), sorted by axis values.
    // NaN marks a missing value.
    struct SweepResult
    {
        std::vector<std::string> axis_names;
        std::vector<Column> columns;

        struct Row
        {
            std::vector<double> axis;
            std::vector<double> values;
        };
        std::vector<Row> rows;

        nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

        std::size_t column_index(const std::string &full_name) const; // throws invalid_argument if absent
        double value(std::size_t row, const std::string &full_name) const;
    };

    // Box in spherical coordinates from which random users are drawn
    struct UserRegion
    {
        std::pair<double, double> distance; // meters
        std::pair<double, double> theta;    // radians, within [0, pi]
        std::pair<double, double> phi;      // radians, within [-pi/2, pi/2]

        void validate() const; // throws invalid_argument for empty or out-of-range intervals
    };

    // Channel models evaluated by a sweep, plus the plane-wave reference gain
    struct ModelSet
    {
        std::vector<ChannelModel> models{ChannelModel::pnusw, ChannelModel::upw};
        UpwConfig upw;
    };

    // Correlation of two users versus M_z with M_y fixed by base. Columns <model>_corr_linear,
    // axis "M" = M_y M_z.
    SweepResult sweep_correlation_vs_m(const ArrayGeometry &base, const UserLocation &user1,
                                       const UserLocation &user2, std::span<const std::size_t> mz_list,
                                       const ModelSet &models);

    // Correlation versus |r1 - r2| with user 2 on direction (theta2, phi2) at each distance in r2_list
    SweepResult sweep_correlation_vs_distance(const ArrayGeometry &geom, const UserLocation &user1, double theta2,
                                              double phi2, std::span<const double> r2_list,
                                              const ModelSet &models);

    // SINR of user 1 for every scheme and model versus M_z. Columns <model>_<scheme>_sinr_db.
    // ZF-infeasible points hold SINR 0 and are counted in metadata["zf_infeasible_points"].
    SweepResult sweep_sinr_vs_m(const ArrayGeometry &base, const UserLocation &user1, const UserLocation &user2,
                                std::span<const double> snr, std::span<const std::size_t> mz_list,
                                const ModelSet &models);

    // MMSE loss factor of user 1 with user 2 placed at every (x, y, 0) cell. Cells with x <= 0
    // are missing. Long-form rows (x_m, y_m), columns <model>_mmse_alpha_linear.
    SweepResult heatmap_snr_loss(const ArrayGeometry &geom, const UserLocation &user1, std::span<const double> x_list,
                                 std::span<const double> y_list, std::span<const double> snr,
                                 const ModelSet &models);

    // K users uniform in each spherical coordinate; draws with dir_x < 1e-3 are repeated.
    // The stream index selects an independent RNG stream for the same seed.
    std::vector<UserLocation> sample_users(const UserRegion &region, std::size_t num_users, std::uint64_t seed,
                                           std::uint64_t stream = 0);

    // Mean sum rate over random drops for each array size. Drop d uses sample_users(region, K,
    // seed, d) for every size and model. Columns <model>_<scheme>_sumrate_bpshz and
    // <model>_<scheme>_sumrate_stderr_bpshz.
    SweepResult sumrate_vs_m(const ArrayGeometry &base, const UserRegion &region, std::size_t num_users,
                             std::span<const double> snr, std::span<const std::pair<std::size_t, std::size_t>> sizes,
                             std::uint64_t seed, std::size_t num_drops, const ModelSet &models);
}

#endif

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

#include "xlmimo/experiments.hpp"
#include "xlmimo/errors.hpp"
#include "xlmimo/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace xlmimo::experiments
{
    namespace
    {
        constexpr double nan = std::numeric_limits<double>::quiet_NaN();
        constexpr double kNearFieldWarning = 0.1; // d / r above this is flagged

        using Json = nlohmann::ordered_json;

        Json geometry_json(const ArrayGeometry &g)
        {
            return Json{{"count_y", g.count_y()},
                        {"count_z", g.count_z()},
                        {"spacing_m", g.spacing()},
                        {"element_area_m2", g.element_area()},
                        {"wavelength_m", g.wavelength()}};
        }

        Json user_json(const UserLocation &u)
        {
            return Json{{"r_m", u.distance()}, {"theta_rad", u.theta()}, {"phi_rad", u.phi()}};
        }

        Json models_json(const ModelSet &m)
        {
            Json names = Json::array();
            for (auto model : m.models)
                names.push_back(std::string(to_string(model)));
            return Json{{"models", names}, {"upw_beta0", m.upw.beta0}};
        }

        void warn_if_close(SweepResult &res, const ArrayGeometry &geom, const UserLocation &u)
        {
            const double ratio = spacing_to_distance_ratio(geom, u);
            if (ratio >= kNearFieldWarning)
                res.metadata["warnings"].push_back("user at r = " + std::to_string(u.distance()) +
                                                   " m is within 10 element spacings (d/r = " +
                                                   std::to_string(ratio) + ")");
        }

        void sort_rows(SweepResult &res)
        {
            std::stable_sort(res.rows.begin(), res.rows.end(),
                             [](const SweepResult::Row &a, const SweepResult::Row &b) { return a.axis < b.axis; });
        }

        void validate_models(const ModelSet &m)
        {
            if (m.models.empty())
                throw invalid_argument("At least one channel model must be selected.");
            for (auto model : m.models)
                if (model == ChannelModel::upw && !(m.upw.beta0 > 0.0))
                    throw invalid_argument("UPW model needs a positive beta0.");
        }

        double uniform(std::mt19937_64 &eng, std::pair<double, double> range)
        {
            const double u = double(eng() >> 11) * 0x1.0p-53; // [0, 1)
            return range.first + (range.second - range.first) * u;
        }

        // ZF SINR for sweeps: collinear interferers are reported like an infeasible user
        SinrResult sweep_sinr(Scheme scheme, const UplinkChannels &ch, std::size_t k)
        {
            if (scheme != Scheme::zf)
                return sinr_closed(scheme, ch, k);
            try
            {
                return sinr_closed(scheme, ch, k);
            }
            catch (const near_singular &)
            {
                return SinrResult{0.0, 1.0, true};
            }
        }

        UplinkChannels two_user_channels(const ResponseVector &a1, const ResponseVector &a2,
                                         std::span<const double> snr)
        {
            numerics::ComplexMatrix A(a1.size(), 2);
            std::copy(a1.entries.begin(), a1.entries.end(), A.col(0).begin());
            std::copy(a2.entries.begin(), a2.entries.end(), A.col(1).begin());
            return UplinkChannels(std::move(A), {snr[0], snr[1]});
        }

        void require_two_snrs(std::span<const double> snr)
        {
            if (snr.size() != 2)
                throw invalid_argument("Two-user experiments need exactly two transmit SNRs.");
        }
    }

    std::string_view suffix(Unit unit)
    {
        switch (unit)
        {
        case Unit::linear:
            return "linear";
        case Unit::db:
            return "db";
        case Unit::bpshz:
            return "bpshz";
        }
        return "";
    }

    std::size_t SweepResult::column_index(const std::string &full_name) const
    {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i].full_name() == full_name)
                return i;
        throw invalid_argument("No column named " + full_name + ".");
    }

    double SweepResult::value(std::size_t row, const std::string &full_name) const
    {
        return rows.at(row).values.at(column_index(full_name));
    }

    void UserRegion::validate() const
    {
        constexpr double pi = std::numbers::pi;
        if (!(distance.first > 0.0) || !(distance.second >= distance.first) || !std::isfinite(distance.second))
            throw invalid_argument("User region: need 0 < r_min <= r_max.");
        if (!(theta.first >= 0.0) || !(theta.second >= theta.first) || !(theta.second <= pi))
            throw invalid_argument("User region: need 0 <= theta_min <= theta_max <= pi.");
        if (!(phi.first >= -0.5 * pi) || !(phi.second >= phi.first) || !(phi.second <= 0.5 * pi))
            throw invalid_argument("User region: need -pi/2 <= phi_min <= phi_max <= pi/2.");
    }

    SweepResult sweep_correlation_vs_m(const ArrayGeometry &base, const UserLocation &user1,
                                       const UserLocation &user2, std::span<const std::size_t> mz_list,
                                       const ModelSet &models)
    {
        validate_models(models);
        SweepResult res;
        res.axis_names = {"M"};
        for (auto m : models.models)
            res.columns.push_back({std::string(to_string(m)) + "_corr", Unit::linear});
        res.metadata["experiment"] = "corr-vs-m";
        res.metadata["geometry"] = geometry_json(base);
        res.metadata["users"] = Json::array({user_json(user1), user_json(user2)});
        res.metadata["channel"] = models_json(models);
        res.metadata["warnings"] = Json::array();
        warn_if_close(res, base, user1);
        warn_if_close(res, base, user2);

        res.rows.resize(mz_list.size());
        parallel_for(mz_list.size(), [&](std::size_t p) {
            const auto geom = base.resized(base.count_y(), mz_list[p]);
            auto &row = res.rows[p];
            row.axis = {double(geom.size())};
            for (auto m : models.models)
            {
                const auto a1 = response(m, geom, user1, models.upw);
                const auto a2 = response(m, geom, user2, models.upw);
                row.values.push_back(correlation(a1, a2));
            }
        });
        sort_rows(res);
        return res;
    }

    SweepResult sweep_correlation_vs_distance(const ArrayGeometry &geom, const UserLocation &user1, double theta2,
                                              double phi2, std::span<const double> r2_list,
                                              const ModelSet &models)
    {
        validate_models(models);
        SweepResult res;
        res.axis_names = {"separation_m"};
        for (auto m : models.models)
            res.columns.push_back({std::string(to_string(m)) + "_corr", Unit::linear});
        res.metadata["experiment"] = "corr-vs-dist";
        res.metadata["geometry"] = geometry_json(geom);
        res.metadata["user1"] = user_json(user1);
        res.metadata["user2_direction"] = Json{{"theta_rad", theta2}, {"phi_rad", phi2}};
        res.metadata["channel"] = models_json(models);
        res.metadata["warnings"] = Json::array();
        warn_if_close(res, geom, user1);

        std::vector<UserLocation> others;
        others.reserve(r2_list.size());
        for (double r2 : r2_list)
        {
            others.emplace_back(r2, theta2, phi2);
            warn_if_close(res, geom, others.back());
        }

        std::vector<ResponseVector> first;
        for (auto m : models.models)
            first.push_back(response(m, geom, user1, models.upw));

        res.rows.resize(r2_list.size());
        parallel_for(r2_list.size(), [&](std::size_t p) {
            auto &row = res.rows[p];
            row.axis = {std::abs(user1.distance() - r2_list[p])};
            for (std::size_t mi = 0; mi < models.models.size(); ++mi)
            {
                const auto a2 = response(models.models[mi], geom, others[p], models.upw);
                row.values.push_back(correlation(first[mi], a2));
            }
        });
        sort_rows(res);
        return res;
    }

    SweepResult sweep_sinr_vs_m(const ArrayGeometry &base, const UserLocation &user1, const UserLocation &user2,
                                std::span<const double> snr, std::span<const std::size_t> mz_list,
                                const ModelSet &models)
    {
        validate_models(models);
        require_two_snrs(snr);
        SweepResult res;
        res.axis_names = {"M"};
        for (auto m : models.models)
            for (auto s : kAllSchemes)
                res.columns.push_back({std::string(to_string(m)) + "_" + std::string(to_string(s)) + "_sinr", Unit::db});
        res.metadata["experiment"] = "sinr-vs-m";
        res.metadata["geometry"] = geometry_json(base);
        res.metadata["users"] = Json::array({user_json(user1), user_json(user2)});
        res.metadata["snr_linear"] = Json::array({snr[0], snr[1]});
        res.metadata["channel"] = models_json(models);
        res.metadata["warnings"] = Json::array();
        warn_if_close(res, base, user1);
        warn_if_close(res, base, user2);

        std::vector<std::size_t> infeasible(mz_list.size(), 0);
        res.rows.resize(mz_list.size());
        parallel_for(mz_list.size(), [&](std::size_t p) {
            const auto geom = base.resized(base.count_y(), mz_list[p]);
            auto &row = res.rows[p];
            row.axis = {double(geom.size())};
            for (auto m : models.models)
            {
                const auto ch = two_user_channels(response(m, geom, user1, models.upw),
                                                  response(m, geom, user2, models.upw), snr);
                for (auto s : kAllSchemes)
                {
                    const auto r = sweep_sinr(s, ch, 0);
                    infeasible[p] += r.zf_infeasible ? 1 : 0;
                    row.values.push_back(r.sinr);
                }
            }
        });
        res.metadata["zf_infeasible_points"] = std::accumulate(infeasible.begin(), infeasible.end(), std::size_t(0));
        sort_rows(res);
        return res;
    }

    SweepResult heatmap_snr_loss(const ArrayGeometry &geom, const UserLocation &user1, std::span<const double> x_list,
                                 std::span<const double> y_list, std::span<const double> snr,
                                 const ModelSet &models)
    {
        validate_models(models);
        require_two_snrs(snr);
        SweepResult res;
        res.axis_names = {"x_m", "y_m"};
        for (auto m : models.models)
            res.columns.push_back({std::string(to_string(m)) + "_mmse_alpha", Unit::linear});
        res.metadata["experiment"] = "snr-loss-heatmap";
        res.metadata["geometry"] = geometry_json(geom);
        res.metadata["user1"] = user_json(user1);
        res.metadata["snr_linear"] = Json::array({snr[0], snr[1]});
        res.metadata["channel"] = models_json(models);
        res.metadata["warnings"] = Json::array();
        warn_if_close(res, geom, user1);

        std::vector<ResponseVector> first;
        for (auto m : models.models)
            first.push_back(response(m, geom, user1, models.upw));

        const std::size_t ny = y_list.size();
        res.rows.resize(x_list.size() * ny);
        parallel_for(res.rows.size(), [&](std::size_t c) {
            const double x = x_list[c / ny];
            const double y = y_list[c % ny];
            auto &row = res.rows[c];
            row.axis = {x, y};
            row.values.assign(models.models.size(), nan);
            if (!(x > 0.0))
                return;
            const auto user2 = cartesian_to_spherical({x, y, 0.0});
            for (std::size_t mi = 0; mi < models.models.size(); ++mi)
            {
                const auto ch = two_user_channels(first[mi], response(models.models[mi], geom, user2, models.upw), snr);
                row.values[mi] = sinr_closed(Scheme::mmse, ch, 0).loss_factor;
            }
        });
        sort_rows(res);
        return res;
    }

    std::vector<UserLocation> sample_users(const UserRegion &region, std::size_t num_users, std::uint64_t seed,
                                           std::uint64_t stream)
    {
        region.validate();
        if (num_users == 0)
            throw invalid_argument("At least one user must be sampled.");

        std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(stream),
                          std::uint32_t(stream >> 32)};
        std::mt19937_64 eng(seq);

        constexpr int kMaxAttempts = 100000;
        std::vector<UserLocation> users;
        users.reserve(num_users);
        while (users.size() < num_users)
        {
            for (int attempt = 0;; ++attempt)
            {
                if (attempt == kMaxAttempts)
                    throw invalid_argument("User region produces only grazing directions (dir_x < 1e-3).");
                const double r = uniform(eng, region.distance);
                const double theta = uniform(eng, region.theta);
                const double phi = uniform(eng, region.phi);
                UserLocation u(r, theta, phi);
                if (u.dir_x() >= 1e-3)
                {
                    users.push_back(u);
                    break;
                }
            }
        }
        return users;
    }

    SweepResult sumrate_vs_m(const ArrayGeometry &base, const UserRegion &region, std::size_t num_users,
                             std::span<const double> snr, std::span<const std::pair<std::size_t, std::size_t>> sizes,
                             std::uint64_t seed, std::size_t num_drops, const ModelSet &models)
    {
        validate_models(models);
        region.validate();
        if (snr.size() != num_users)
            throw invalid_argument("One transmit SNR per user is required.");
        if (num_drops == 0)
            throw invalid_argument("At least one random drop is required.");
        for (const auto &[my, mz] : sizes)
            if (my * mz < num_users)
                throw invalid_argument("Every array size must have at least as many elements as users.");

        SweepResult res;
        res.axis_names = {"M"};
        for (auto m : models.models)
            for (auto s : kAllSchemes)
                res.columns.push_back({std::string(to_string(m)) + "_" + std::string(to_string(s)) + "_sumrate",
                                       Unit::bpshz});
        for (auto m : models.models)
            for (auto s : kAllSchemes)
                res.columns.push_back(
                    {std::string(to_string(m)) + "_" + std::string(to_string(s)) + "_sumrate_stderr", Unit::bpshz});

        const std::size_t nm = models.models.size();
        const std::size_t ns = std::size(kAllSchemes);
        const std::size_t per_size = nm * ns;

        // rates[d][size][model * ns + scheme]
        std::vector<std::vector<double>> rates(num_drops, std::vector<double>(sizes.size() * per_size));
        std::vector<std::size_t> infeasible(num_drops, 0);

        parallel_for(num_drops, [&](std::size_t d) {
            const auto users = sample_users(region, num_users, seed, d);
            std::vector<double> gammas(num_users);
            for (std::size_t si = 0; si < sizes.size(); ++si)
            {
                const auto geom = base.resized(sizes[si].first, sizes[si].second);
                for (std::size_t mi = 0; mi < nm; ++mi)
                {
                    const Scenario sc(geom, users, std::vector<double>(snr.begin(), snr.end()), models.models[mi],
                                      models.upw);
                    const auto ch = UplinkChannels::from_scenario(sc);
                    for (std::size_t s = 0; s < ns; ++s)
                    {
                        for (std::size_t k = 0; k < num_users; ++k)
                        {
                            const auto r = sweep_sinr(kAllSchemes[s], ch, k);
                            infeasible[d] += r.zf_infeasible ? 1 : 0;
                            gammas[k] = r.sinr;
                        }
                        rates[d][si * per_size + mi * ns + s] = sum_rate(gammas);
                    }
                }
            }
        });

        res.rows.resize(sizes.size());
        for (std::size_t si = 0; si < sizes.size(); ++si)
        {
            auto &row = res.rows[si];
            row.axis = {double(sizes[si].first * sizes[si].second)};
            row.values.assign(2 * per_size, nan);
            for (std::size_t c = 0; c < per_size; ++c)
            {
                double mean = 0.0;
                for (std::size_t d = 0; d < num_drops; ++d)
                    mean += rates[d][si * per_size + c];
                mean /= double(num_drops);
                double var = 0.0;
                for (std::size_t d = 0; d < num_drops; ++d)
                {
                    const double e = rates[d][si * per_size + c] - mean;
                    var += e * e;
                }
                row.values[c] = mean;
                row.values[per_size + c] =
                    num_drops > 1 ? std::sqrt(var / double(num_drops - 1) / double(num_drops)) : 0.0;
            }
        }

        res.metadata["experiment"] = "sumrate-vs-m";
        res.metadata["geometry"] = geometry_json(base);
        Json size_list = Json::array();
        for (const auto &[my, mz] : sizes)
            size_list.push_back(Json::array({my, mz}));
        res.metadata["array_sizes"] = size_list;
        res.metadata["region"] = Json{{"r_m", {region.distance.first, region.distance.second}},
                                      {"theta_rad", {region.theta.first, region.theta.second}},
                                      {"phi_rad", {region.phi.first, region.phi.second}}};
        res.metadata["num_users"] = num_users;
        res.metadata["snr_linear"] = Json(std::vector<double>(snr.begin(), snr.end()));
        res.metadata["seed"] = seed;
        res.metadata["num_drops"] = num_drops;
        res.metadata["sampling"] = "uniform per spherical coordinate; stream d = drop index";
        res.metadata["channel"] = models_json(models);
        res.metadata["zf_infeasible_users"] = std::accumulate(infeasible.begin(), infeasible.end(), std::size_t(0));
        res.metadata["warnings"] = Json::array();
        if (region.distance.first > 0.0)
        {
            const UserLocation nearest(region.distance.first, 0.5 * std::numbers::pi, 0.0);
            warn_if_close(res, base, nearest);
        }
        sort_rows(res);
        return res;
    }
}

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

#include "oracles.hpp"
#include "xlmimo/errors.hpp"
#include "xlmimo/experiments.hpp"
#include "xlmimo/parallel.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace xlmimo;
using namespace xlmimo::experiments;
using std::numbers::pi;

namespace
{
    bool same_values(const SweepResult &a, const SweepResult &b)
    {
        if (a.rows.size() != b.rows.size())
            return false;
        for (std::size_t i = 0; i < a.rows.size(); ++i)
        {
            if (a.rows[i].axis != b.rows[i].axis || a.rows[i].values.size() != b.rows[i].values.size())
                return false;
            for (std::size_t j = 0; j < a.rows[i].values.size(); ++j)
            {
                const double x = a.rows[i].values[j], y = b.rows[i].values[j];
                if (!(x == y || (std::isnan(x) && std::isnan(y))))
                    return false;
            }
        }
        return true;
    }
}

TEST_CASE("correlation versus array size")
{
    const auto base = ArrayGeometry::with_default_elements(10, 1);
    const UserLocation u1(25, pi / 2, 0), u2(250, pi / 2, 0);
    const std::vector<std::size_t> one{1};
    ModelSet models;
    models.upw = UpwConfig::matching(base);
    auto res = sweep_correlation_vs_m(base, u1, u2, one, models);
    CHECK(res.rows.size() == 1);
    CHECK(res.axis_names == std::vector<std::string>{"M"});
    CHECK(res.columns.size() == 2);
    CHECK(res.columns[0].full_name() == "pnusw_corr_linear");
    CHECK(res.columns[1].full_name() == "upw_corr_linear");

    const std::vector<std::size_t> mz{1001, 11, 101};
    res = sweep_correlation_vs_m(base, u1, u2, mz, models);
    REQUIRE(res.rows.size() == 3);
    CHECK(res.rows[0].axis[0] == 110);
    CHECK(res.rows[2].axis[0] == 10010);
    for (std::size_t r = 0; r < 3; ++r)
        CHECK(std::abs(res.value(r, "upw_corr_linear") - 1.0) <= 1e-12);
    CHECK(res.value(2, "pnusw_corr_linear") < res.value(0, "pnusw_corr_linear"));

    const auto g = base.resized(10, 101);
    CHECK(oracle::rel_err(res.value(1, "pnusw_corr_linear"),
                          oracle::correlation(oracle::pnusw(g, u1), oracle::pnusw(g, u2))) <= 1e-10);
    CHECK_THROWS_AS(res.column_index("nope_linear"), invalid_argument);
}

TEST_CASE("correlation versus distance")
{
    const auto g = ArrayGeometry::with_default_elements(41, 41);
    const UserLocation u1(20, pi / 2, 0);
    const std::vector<double> r2{220.0, 20.0, 21.0};
    ModelSet models;
    models.upw = UpwConfig::matching(g);
    const auto res = sweep_correlation_vs_distance(g, u1, pi / 2, 0, r2, models);
    REQUIRE(res.rows.size() == 3);
    CHECK(res.axis_names == std::vector<std::string>{"separation_m"});
    CHECK(res.rows[0].axis[0] == 0.0);
    CHECK(res.value(0, "pnusw_corr_linear") == doctest::Approx(1.0).epsilon(1e-13));
    for (std::size_t r = 0; r < 3; ++r)
        CHECK(std::abs(res.value(r, "upw_corr_linear") - 1.0) <= 1e-12);
    CHECK(res.value(2, "pnusw_corr_linear") < res.value(1, "pnusw_corr_linear"));
}

TEST_CASE("sinr versus array size")
{
    const auto base = ArrayGeometry::with_default_elements(10, 1);
    const UserLocation u1(25, pi / 2, 0), u2(250, pi / 2, 0);
    const double snr = 1e5 / UpwConfig::matching(base).beta0;
    const std::vector<double> snrs{snr, snr};
    const std::vector<std::size_t> mz{11, 101, 301};
    ModelSet models;
    models.upw = UpwConfig::matching(base);
    const auto res = sweep_sinr_vs_m(base, u1, u2, snrs, mz, models);
    CHECK(res.columns.size() == 6);
    for (const auto &c : res.columns)
        CHECK(c.unit == Unit::db);
    CHECK(res.metadata["zf_infeasible_points"].get<std::size_t>() == 3);
    for (std::size_t r = 0; r < res.rows.size(); ++r)
    {
        CHECK(res.value(r, "upw_zf_sinr_db") <= 1e-6);
        for (const char *m : {"pnusw", "upw"})
        {
            const std::string p = m;
            const double mm = res.value(r, p + "_mmse_sinr_db");
            CHECK(mm >= res.value(r, p + "_mrc_sinr_db") * (1 - 1e-9));
            CHECK(mm >= res.value(r, p + "_zf_sinr_db") * (1 - 1e-9));
        }
    }
    CHECK(res.value(2, "pnusw_zf_sinr_db") > res.value(0, "pnusw_zf_sinr_db"));
}

TEST_CASE("snr loss heat map")
{
    const auto g = ArrayGeometry::with_default_elements(41, 41);
    const UserLocation u1(100, pi / 2, 0);
    ModelSet models;
    models.upw = UpwConfig::matching(g);
    const double snr = 1e5 / models.upw.beta0;
    const std::vector<double> snrs{snr, snr};
    const std::vector<double> xs{-5.0, 0.0, 100.0, 110.0}, ys{0.0, 10.0};
    const auto res = heatmap_snr_loss(g, u1, xs, ys, snrs, models);
    REQUIRE(res.rows.size() == 8);
    CHECK(res.axis_names == std::vector<std::string>{"x_m", "y_m"});
    CHECK(std::isnan(res.rows[0].values[0]));
    CHECK(std::isnan(res.rows[3].values[1]));

    // co-located user
    const auto a2 = pnusw_response(g, u1);
    const double q = snr * channel_power(a2);
    CHECK(oracle::rel_err(res.value(4, "pnusw_mmse_alpha_linear"), q / (1 + q)) <= 1e-9);
    for (std::size_t r = 4; r < 8; ++r)
    {
        CHECK(res.rows[r].values[0] >= 0.0);
        CHECK(res.rows[r].values[0] <= 1.0);
    }
    CHECK(res.value(6, "pnusw_mmse_alpha_linear") < res.value(4, "pnusw_mmse_alpha_linear"));
}

TEST_CASE("user sampling")
{
    const UserRegion region{{50, 100}, {0, pi / 3}, {pi / 6, pi / 3}};
    const auto a = sample_users(region, 10, 42);
    const auto b = sample_users(region, 10, 42);
    const auto c = sample_users(region, 10, 42, 1);
    REQUIRE(a.size() == 10);
    bool differs = false;
    for (std::size_t i = 0; i < 10; ++i)
    {
        CHECK(a[i].distance() == b[i].distance());
        CHECK(a[i].theta() == b[i].theta());
        CHECK(a[i].phi() == b[i].phi());
        differs = differs || a[i].distance() != c[i].distance();
    }
    CHECK(differs);

    const auto many = sample_users(region, 100000, 7);
    double mean = 0;
    for (const auto &u : many)
    {
        REQUIRE(u.distance() >= 50);
        REQUIRE(u.distance() <= 100);
        REQUIRE(u.theta() >= 0);
        REQUIRE(u.theta() <= pi / 3);
        REQUIRE(u.phi() >= pi / 6);
        REQUIRE(u.phi() <= pi / 3);
        REQUIRE(u.dir_x() >= 1e-3);
        mean += u.distance();
    }
    mean /= double(many.size());
    CHECK(std::abs(mean - 75.0) <= 0.75);

    CHECK_THROWS_AS(sample_users({{10, 5}, {0, 1}, {0, 1}}, 1, 1), invalid_argument);
    CHECK_THROWS_AS(sample_users({{1, 5}, {0, 1}, {0, 2}}, 1, 1), invalid_argument);
}

TEST_CASE("sum rate sweep")
{
    const auto base = ArrayGeometry::with_default_elements(1, 1);
    const UserRegion region{{50, 100}, {0, pi / 3}, {pi / 6, pi / 3}};
    ModelSet models;
    models.upw = UpwConfig::matching(base);
    const double p = 1e5 / models.upw.beta0;

    SUBCASE("single user: every scheme gives log2(1 + snr)")
    {
        const std::vector<double> snr{p};
        const std::vector<std::pair<std::size_t, std::size_t>> sizes{{5, 5}};
        const auto res = sumrate_vs_m(base, region, 1, snr, sizes, 3, 4, models);
        for (const char *m : {"pnusw", "upw"})
        {
            const std::string s = m;
            CHECK(oracle::rel_err(res.value(0, s + "_mrc_sumrate_bpshz"), res.value(0, s + "_zf_sumrate_bpshz")) <= 1e-12);
            CHECK(oracle::rel_err(res.value(0, s + "_mrc_sumrate_bpshz"), res.value(0, s + "_mmse_sumrate_bpshz")) <= 1e-12);
        }
        double mean = 0;
        for (std::size_t d = 0; d < 4; ++d)
        {
            const auto u = sample_users(region, 1, 3, d);
            mean += std::log2(1 + p * channel_power(pnusw_response(base.resized(5, 5), u[0])));
        }
        CHECK(oracle::rel_err(res.value(0, "pnusw_mrc_sumrate_bpshz"), mean / 4) <= 1e-12);
    }

    SUBCASE("several users: ordering, columns and thread independence")
    {
        const std::vector<double> snr(4, p);
        const std::vector<std::pair<std::size_t, std::size_t>> sizes{{9, 9}, {3, 3}};
        set_max_threads(1);
        const auto a = sumrate_vs_m(base, region, 4, snr, sizes, 11, 6, models);
        set_max_threads(4);
        const auto b = sumrate_vs_m(base, region, 4, snr, sizes, 11, 6, models);
        set_max_threads(0);
        CHECK(same_values(a, b));
        CHECK(a.columns.size() == 12);
        CHECK(a.rows[0].axis[0] == 9);
        CHECK(a.rows[1].axis[0] == 81);
        for (std::size_t r = 0; r < 2; ++r)
            for (const char *m : {"pnusw", "upw"})
            {
                const std::string s = m;
                const double mm = a.value(r, s + "_mmse_sumrate_bpshz");
                CHECK(mm >= a.value(r, s + "_zf_sumrate_bpshz") * (1 - 1e-9));
                CHECK(mm >= a.value(r, s + "_mrc_sumrate_bpshz") * (1 - 1e-9));
                CHECK(a.value(r, s + "_zf_sumrate_bpshz") >= 0.0);
                CHECK(a.value(r, s + "_mmse_sumrate_stderr_bpshz") >= 0.0);
            }
        CHECK(a.metadata["num_drops"].get<std::size_t>() == 6);
    }

    SUBCASE("arrays smaller than the user count are rejected")
    {
        const std::vector<double> snr(4, p);
        const std::vector<std::pair<std::size_t, std::size_t>> sizes{{1, 3}};
        CHECK_THROWS_AS(sumrate_vs_m(base, region, 4, snr, sizes, 1, 1, models), invalid_argument);
    }
}

TEST_CASE("sweeps do not depend on the thread count")
{
    const auto base = ArrayGeometry::with_default_elements(10, 1);
    const UserLocation u1(25, pi / 2, 0), u2(250, pi / 2, 0);
    std::vector<std::size_t> mz;
    for (std::size_t m = 1; m <= 101; m += 10)
        mz.push_back(m);
    ModelSet models;
    models.upw = UpwConfig::matching(base);
    set_max_threads(1);
    const auto a = sweep_correlation_vs_m(base, u1, u2, mz, models);
    set_max_threads(3);
    const auto b = sweep_correlation_vs_m(base, u1, u2, mz, models);
    set_max_threads(0);
    CHECK(same_values(a, b));
}

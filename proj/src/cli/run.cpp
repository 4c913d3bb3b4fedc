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

#include "xlmimo/cli/run.hpp"
#include "xlmimo/cli/csv.hpp"
#include "xlmimo/errors.hpp"
#include "xlmimo/parallel.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <optional>

#ifndef XLMIMO_VERSION
#define XLMIMO_VERSION "0.0.0"
#endif

namespace xlmimo::cli
{
    namespace
    {
        void report_error(std::ostream &err, std::string_view kind, const std::string &message, int code)
        {
            nlohmann::ordered_json j;
            j["error"] = {{"kind", kind}, {"message", message}, {"exit_code", code}};
            err << j.dump() << '\n';
        }
    }

    std::string_view library_version()
    {
        return XLMIMO_VERSION;
    }

    experiments::SweepResult compute(const RunConfig &cfg)
    {
        const auto geom = cfg.geometry();
        const auto models = cfg.model_set();
        switch (cfg.experiment)
        {
        case Experiment::corr_vs_m:
            return experiments::sweep_correlation_vs_m(geom, UserLocation(cfg.user1_r, cfg.user1_theta, cfg.user1_phi),
                                                       UserLocation(cfg.user2_r, cfg.user2_theta, cfg.user2_phi),
                                                       cfg.mz_list, models);
        case Experiment::corr_vs_dist:
        {
            std::vector<double> r2;
            for (double s : cfg.separation_list)
                r2.push_back(cfg.user1_r + s);
            return experiments::sweep_correlation_vs_distance(
                geom, UserLocation(cfg.user1_r, cfg.user1_theta, cfg.user1_phi), cfg.user2_theta, cfg.user2_phi, r2,
                models);
        }
        case Experiment::sinr_vs_m:
        {
            const auto snr = cfg.snr_linear(2);
            return experiments::sweep_sinr_vs_m(geom, UserLocation(cfg.user1_r, cfg.user1_theta, cfg.user1_phi),
                                                UserLocation(cfg.user2_r, cfg.user2_theta, cfg.user2_phi), snr,
                                                cfg.mz_list, models);
        }
        case Experiment::snr_loss_heatmap:
        {
            const auto snr = cfg.snr_linear(2);
            return experiments::heatmap_snr_loss(geom, UserLocation(cfg.user1_r, cfg.user1_theta, cfg.user1_phi),
                                                 cfg.x_list, cfg.y_list, snr, models);
        }
        case Experiment::sumrate_vs_m:
        {
            std::vector<std::pair<std::size_t, std::size_t>> sizes;
            if (cfg.sumrate_growth == "square")
                for (auto n : cfg.n_list)
                    sizes.emplace_back(n, n);
            else
                for (auto mz : cfg.mz_list)
                    sizes.emplace_back(cfg.my, mz);
            const auto snr = cfg.snr_linear(cfg.num_users);
            return experiments::sumrate_vs_m(geom, cfg.region(), cfg.num_users, snr, sizes, cfg.seed,
                                             cfg.num_drops, models);
        }
        }
        throw invalid_argument("Unknown experiment.");
    }

    RunOutput run(const RunConfig &cfg)
    {
        const auto start = std::chrono::steady_clock::now();
        RunOutput o;
        o.result = compute(cfg);
        o.csv = to_csv(o.result);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        o.csv_path = cfg.out;
        o.sidecar_path = cfg.out + ".json";

        nlohmann::ordered_json columns = nlohmann::ordered_json::array();
        for (const auto &a : o.result.axis_names)
            columns.push_back(a);
        for (const auto &c : o.result.columns)
            columns.push_back(c.full_name());

        auto &s = o.sidecar;
        s["experiment"] = std::string(to_string(cfg.experiment));
        s["config"] = cfg.to_json();
        s["seed"] = cfg.seed;
        s["library_version"] = std::string(library_version());
        s["wall_time_s"] = wall;
        s["csv"] = o.csv_path;
        s["columns"] = columns;
        s["metadata"] = o.result.metadata;

        write_atomic(o.csv_path, o.csv);
        write_atomic(o.sidecar_path, s.dump(2) + "\n");
        return o;
    }

    int cli_main(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
    {
        CLI::App app{"Near-field multi-user XL-MIMO simulations. Writes a CSV table and a JSON sidecar."};
        app.set_version_flag("--version", std::string(library_version()));

        std::string config_path;
        unsigned threads = 0;
        app.add_option("-c,--config", config_path, "Config file (key = value lines, or JSON such as a run sidecar)");
        app.add_option("--threads", threads, "Worker threads (0: XLMIMO_THREADS or hardware concurrency)");

        const auto &keys = known_keys();
        std::vector<std::optional<std::string>> flag_values(keys.size());
        for (std::size_t i = 0; i < keys.size(); ++i)
            app.add_option("--" + keys[i], flag_values[i], "Override config key '" + keys[i] + "'");

        try
        {
            app.parse(argc, argv);
        }
        catch (const CLI::CallForHelp &)
        {
            out << app.help();
            return 0;
        }
        catch (const CLI::CallForVersion &)
        {
            out << library_version() << '\n';
            return 0;
        }
        catch (const CLI::ParseError &e)
        {
            report_error(err, "usage_error", e.what(), 1);
            return 1;
        }

        RunConfig cfg;
        try
        {
            std::vector<RawConfig> layers;
            if (!config_path.empty())
                layers.push_back(load_config_file(config_path));
            RawConfig flags;
            for (std::size_t i = 0; i < keys.size(); ++i)
                if (flag_values[i])
                    flags[keys[i]] = RawValue{*flag_values[i], "--" + keys[i]};
            layers.push_back(std::move(flags));
            cfg = resolve(layers);
        }
        catch (const config_error &e)
        {
            report_error(err, "config_error", e.what(), 1);
            return 1;
        }

        set_max_threads(threads);
        try
        {
            const auto o = run(cfg);
            nlohmann::ordered_json summary;
            summary["csv"] = o.csv_path;
            summary["sidecar"] = o.sidecar_path;
            summary["rows"] = o.result.rows.size();
            out << summary.dump() << '\n';
            return 0;
        }
        catch (const config_error &e)
        {
            report_error(err, "config_error", e.what(), 1);
            return 1;
        }
        catch (const error &e)
        {
            report_error(err, e.kind(), e.what(), 2);
            return 2;
        }
        catch (const std::exception &e)
        {
            report_error(err, "io_error", e.what(), 1);
            return 1;
        }
    }
}

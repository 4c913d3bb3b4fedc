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

#ifndef XLMIMO_CLI_CONFIG_HPP
#define XLMIMO_CLI_CONFIG_HPP

#include "xlmimo/channel.hpp"
#include "xlmimo/experiments.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace xlmimo::cli
{
    enum class Experiment
    {
        corr_vs_m,
        corr_vs_dist,
        sinr_vs_m,
        snr_loss_heatmap,
        sumrate_vs_m
    };

    std::string_view to_string(Experiment e);
    Experiment parse_experiment(std::string_view name); // throws config_error

    // A value as written by the user, with where it came from for diagnostics
    struct RawValue
    {
        std::string text;
        std::string origin; // "run.cfg:12", "--my", "run.json:config.my"
    };

    using RawConfig = std::map<std::string, RawValue>;

    // "key = value" lines, '#' starts a comment. Throws config_error with file:line on bad syntax
    // or duplicate keys.
    RawConfig parse_key_value(std::string_view text, const std::string &source_name);

    // JSON document; when it has a "config" object (a run sidecar) only that object is read
    RawConfig parse_json_config(std::string_view text, const std::string &source_name);

    // Reads a config file; JSON when the first non-blank character is '{', key-value otherwise
    RawConfig load_config_file(const std::filesystem::path &path);

    // Fully resolved run description. Defaults:
    // lambda = 0.1256 m, d = lambda/2, A = lambda^2/(4 pi), reference SNR P_k beta0 = 50 dB.
    struct RunConfig
    {
        Experiment experiment = Experiment::corr_vs_m;
        std::string model = "both"; // both | pnusw | upw
        std::uint64_t seed = 1;
        std::string out;

        double wavelength = kDefaultWavelength;
        double spacing = 0.5 * kDefaultWavelength;
        double element_area = 0.0; // 0 until resolved
        std::size_t my = 10;
        std::size_t mz = 1;
        double beta0 = 0.0;              // UPW reference gain; 0 until resolved
        std::vector<double> snr_db{50.0}; // reference SNR P_k beta0 per user, or one value for all

        double user1_r = 25.0, user1_theta = 0.0, user1_phi = 0.0;
        double user2_r = 250.0, user2_theta = 0.0, user2_phi = 0.0;

        std::vector<std::size_t> mz_list;
        std::vector<double> separation_list;
        std::vector<double> x_list;
        std::vector<double> y_list;

        std::string sumrate_growth = "square"; // square | fixed-my
        std::vector<std::size_t> n_list;
        std::size_t num_users = 10;
        std::size_t num_drops = 100;
        double r_min = 50.0, r_max = 100.0;
        double theta_min = 0.0, theta_max = 0.0;
        double phi_min = 0.0, phi_max = 0.0;

        ArrayGeometry geometry() const;
        experiments::ModelSet model_set() const;
        // Transmit SNR P_k = 10^(snr_db/10) / beta0 for each of num users
        std::vector<double> snr_linear(std::size_t num) const;
        experiments::UserRegion region() const;

        // Keys that apply to this experiment, with canonical values (numbers in shortest
        // round-trip form, angles in radians). Feeding this back through resolve() gives an
        // identical RunConfig.
        nlohmann::ordered_json to_json() const;
    };

    // Every key accepted by some experiment, in canonical order
    const std::vector<std::string> &known_keys();

    // Builds a validated RunConfig: experiment defaults, then entries of raw (later maps win).
    // Throws config_error for unknown or inapplicable keys, malformed values and violated ranges,
    // naming the key and its origin.
    RunConfig resolve(const std::vector<RawConfig> &layers);

    // Parsers shared by the config layers; throw config_error on malformed input
    double parse_number(std::string_view text);
    double parse_angle(std::string_view text);          // "pi/2", "-pi/3", "2*pi/3", "0.25"
    std::vector<double> parse_list(std::string_view text, bool angles = false); // "[1, 2]" or "1:1:10"

    // Shortest round-trip decimal form of a double
    std::string format_number(double v);
}

#endif

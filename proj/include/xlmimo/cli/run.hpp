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

#ifndef XLMIMO_CLI_RUN_HPP
#define XLMIMO_CLI_RUN_HPP

#include "xlmimo/cli/config.hpp"
#include "xlmimo/experiments.hpp"

#include <json.hpp>

#include <ostream>
#include <string>

namespace xlmimo::cli
{
    // Library version compiled into the CLI and sidecars
    std::string_view library_version();

    // Evaluates the configured experiment without touching the file system
    experiments::SweepResult compute(const RunConfig &cfg);

    struct RunOutput
    {
        experiments::SweepResult result;
        std::string csv;                 // serialized table
        nlohmann::ordered_json sidecar;  // contents of <out>.json
        std::string csv_path;
        std::string sidecar_path;
    };

    // Computes the experiment and writes cfg.out and cfg.out + ".json". Library exceptions
    // propagate unchanged.
    RunOutput run(const RunConfig &cfg);

    // Command-line entry point. Returns 0 on success, 1 for configuration or I/O errors and 2
    // for numerical failures; errors are reported on err as a single JSON object.
    int cli_main(int argc, const char *const *argv, std::ostream &out, std::ostream &err);
}

#endif

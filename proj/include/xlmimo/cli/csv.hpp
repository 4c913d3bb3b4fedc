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

#ifndef XLMIMO_CLI_CSV_HPP
#define XLMIMO_CLI_CSV_HPP

#include "xlmimo/experiments.hpp"

#include <filesystem>
#include <string>

namespace xlmimo::cli
{
    // Serializes a sweep as CSV: axis columns, then metric columns named <name>_<unit>.
    // dB columns are converted from the stored linear values here. Numbers use the shortest
    // round-trip form, missing values (NaN) are empty fields, infinities are "inf" / "-inf".
    // Rows end with LF.
    std::string to_csv(const experiments::SweepResult &result);

    // Formats one cell; exposed for tests
    std::string format_cell(double value);

    // Writes text to path through a temporary file in the same directory and a rename, so
    // readers never observe a partially written file. Throws std::runtime_error on I/O failure.
    void write_atomic(const std::filesystem::path &path, const std::string &text);
}

#endif

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

#include "xlmimo/cli/csv.hpp"
#include "xlmimo/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include <unistd.h>

namespace xlmimo::cli
{
    namespace
    {
        std::string quote(const std::string &field)
        {
            if (field.find_first_of(",\"\r\n") == std::string::npos)
                return field;
            std::string out = "\"";
            for (char c : field)
            {
                if (c == '"')
                    out += '"';
                out += c;
            }
            return out + "\"";
        }
    }

    std::string format_cell(double value)
    {
        if (std::isnan(value))
            return {};
        if (std::isinf(value))
            return value > 0.0 ? "inf" : "-inf";
        if (value == 0.0)
            return "0";
        return format_number(value);
    }

    std::string to_csv(const experiments::SweepResult &result)
    {
        std::string out;
        bool first = true;
        auto field = [&](const std::string &s) {
            if (!first)
                out += ',';
            out += s;
            first = false;
        };

        for (const auto &a : result.axis_names)
            field(quote(a));
        for (const auto &c : result.columns)
            field(quote(c.full_name()));
        out += '\n';

        for (const auto &row : result.rows)
        {
            first = true;
            for (double v : row.axis)
                field(format_cell(v));
            for (std::size_t j = 0; j < result.columns.size(); ++j)
            {
                double v = j < row.values.size() ? row.values[j] : std::nan("");
                if (result.columns[j].unit == experiments::Unit::db && !std::isnan(v))
                    v = 10.0 * std::log10(v);
                field(format_cell(v));
            }
            out += '\n';
        }
        return out;
    }

    void write_atomic(const std::filesystem::path &path, const std::string &text)
    {
        namespace fs = std::filesystem;
        const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
        std::error_code ec;
        fs::create_directories(dir, ec);

        const fs::path tmp = dir / ("." + path.filename().string() + ".tmp." + std::to_string(::getpid()));
        {
            std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
            if (!f)
                throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
            f.write(text.data(), std::streamsize(text.size()));
            f.flush();
            if (!f)
            {
                f.close();
                fs::remove(tmp, ec);
                throw std::runtime_error("failed to write '" + tmp.string() + "'");
            }
        }
        fs::rename(tmp, path, ec);
        if (ec)
        {
            std::error_code ignore;
            fs::remove(tmp, ignore);
            throw std::runtime_error("cannot move output into place at '" + path.string() + "': " + ec.message());
        }
    }
}

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

#ifndef XLMIMO_ERRORS_HPP
#define XLMIMO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace xlmimo
{
    // Base class of every error raised by the library. The CLI maps these to exit code 2,
    // except config_error which maps to exit code 1.
    class error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
        virtual const char *kind() const noexcept { return "error"; }
    };

    // Invalid argument or violated precondition (bad counts, angles outside their range, ...)
    class invalid_argument : public error
    {
    public:
        using error::error;
        const char *kind() const noexcept override { return "invalid_argument"; }
    };

    // Element index outside the array
    class index_range_error : public error
    {
    public:
        using error::error;
        const char *kind() const noexcept override { return "index_range"; }
    };

    // User coincides with an element, lies behind the array, or sits at the origin
    class degenerate_geometry : public error
    {
    public:
        using error::error;
        const char *kind() const noexcept override { return "degenerate_geometry"; }
    };

    // Zero-power channel vector (user in the array plane under the PNUSW model)
    class degenerate_channel : public error
    {
    public:
        using error::error;
        const char *kind() const noexcept override { return "degenerate_channel"; }
    };

    // Vectors or matrices of incompatible shape or geometry
    class dimension_error : public error
    {
    public:
        using error::error;
        const char *kind() const noexcept override { return "dimension"; }
    };

    // Caller broke an API contract (non-unit beamformer, non-Hermitian matrix)
    class contract_error : public error
    {
    public:
        using error::error;
        const char *kind() const noexcept override { return "contract"; }
    };

    // Hermitian system too ill-conditioned to solve; carries the condition estimate
    class near_singular : public error
    {
    public:
        near_singular(const std::string &what, double condition_estimate)
            : error(what), condition_(condition_estimate) {}
        double condition() const noexcept { return condition_; }
        const char *kind() const noexcept override { return "near_singular"; }

    private:
        double condition_;
    };

    // The desired channel lies (numerically) inside the span of the interferers
    class zf_infeasible : public error
    {
    public:
        using error::error;
        const char *kind() const noexcept override { return "zf_infeasible"; }
    };

    // Bad configuration input; carries the offending field and, when known, its line
    class config_error : public error
    {
    public:
        using error::error;
        const char *kind() const noexcept override { return "config"; }
    };
}

#endif

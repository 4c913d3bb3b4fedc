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

#ifndef XLMIMO_PARALLEL_HPP
#define XLMIMO_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace xlmimo
{
    // Upper bound on worker threads. 0 restores the default: XLMIMO_THREADS if set, otherwise
    // the hardware concurrency.
    void set_max_threads(unsigned n);
    unsigned max_threads();

    // Runs body(i) for i in [0, n). Items are independent and write to their own slots, so
    // results never depend on the thread count. The exception of the lowest failing index is
    // rethrown after all workers stop.
    void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body);
}

#endif

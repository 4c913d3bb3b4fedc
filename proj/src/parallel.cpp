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

#include "xlmimo/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace xlmimo
{
    namespace
    {
        std::atomic<unsigned> thread_override{0};

        unsigned default_threads()
        {
            if (const char *env = std::getenv("XLMIMO_THREADS"))
            {
                try
                {
                    const long v = std::stol(env);
                    if (v > 0)
                        return unsigned(v);
                }
                catch (const std::exception &)
                {
                }
            }
            return std::max(1u, std::thread::hardware_concurrency());
        }
    }

    void set_max_threads(unsigned n)
    {
        thread_override = n;
    }

    unsigned max_threads()
    {
        const unsigned n = thread_override.load();
        return n > 0 ? n : default_threads();
    }

    void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body)
    {
        const std::size_t workers = std::min<std::size_t>(max_threads(), n);
        if (workers <= 1)
        {
            for (std::size_t i = 0; i < n; ++i)
                body(i);
            return;
        }

        std::atomic<std::size_t> next{0};
        std::mutex error_mutex;
        std::exception_ptr first_error;
        std::size_t first_error_index = n;

        auto worker = [&]
        {
            for (std::size_t i = next++; i < n; i = next++)
            {
                try
                {
                    body(i);
                }
                catch (...)
                {
                    std::lock_guard lock(error_mutex);
                    if (i < first_error_index)
                    {
                        first_error_index = i;
                        first_error = std::current_exception();
                    }
                }
            }
        };

        {
            std::vector<std::jthread> pool;
            pool.reserve(workers - 1);
            for (std::size_t t = 1; t < workers; ++t)
                pool.emplace_back(worker);
            worker();
        }
        if (first_error)
            std::rethrow_exception(first_error);
    }
}

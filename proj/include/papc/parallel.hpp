// SPDX-License-Identifier: Apache-2.0
//
// papc — precoding and combining for frequency-selective mmWave MIMO links
// with per-antenna power constraints.
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

#ifndef PAPC_PARALLEL_HPP
#define PAPC_PARALLEL_HPP

#ifdef _OPENMP
#include <omp.h>
#endif

namespace papc
{

/// Execution policy for the data-parallel kernels. Serial is the reference
/// path; OpenMP must produce bit-identical results (loop bodies only write
/// their own slot, reductions stay serial).
enum class Exec
{
    serial,
    openmp,
};

inline int hardware_threads()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// Runs body(i) for i in [0, n). With Exec::openmp the iterations are
/// distributed over `threads` workers (0 = runtime default).
template <class Body>
void parallel_for(Exec exec, int n, const Body& body, int threads = 0)
{
#ifdef _OPENMP
    if (exec == Exec::openmp && n > 1)
    {
        if (threads <= 0) threads = omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
#else
    (void)threads;
#endif
    for (int i = 0; i < n; ++i) body(i);
}

} // namespace papc

#endif

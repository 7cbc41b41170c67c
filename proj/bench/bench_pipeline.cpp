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
//
// Times the serial reference kernels against the OpenMP ones on a
// System I-sized workload and prints the speedups.

#include "papc/channel.hpp"
#include "papc/digital.hpp"
#include "papc/hybrid.hpp"
#include "papc/parallel.hpp"

#include <chrono>
#include <cstdio>
#include <functional>

using namespace papc;

namespace
{

double time_ms(const std::function<void()>& body, int repeats)
{
    double best = 1e300;
    for (int i = 0; i < repeats; ++i)
    {
        const auto start = std::chrono::steady_clock::now();
        body();
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        if (ms < best) best = ms;
    }
    return best;
}

void report(const char* name, double serial_ms, double openmp_ms)
{
    std::printf("%-22s serial %9.2f ms   openmp %9.2f ms   speedup %5.2fx\n", name, serial_ms,
                openmp_ms, serial_ms / openmp_ms);
}

} // namespace

int main()
{
    SystemConfig cfg;
    cfg.n_tx = 64;
    cfg.n_rx = 32;
    cfg.l_tx = 4;
    cfg.l_rx = 4;
    cfg.n_streams = 2;
    cfg.n_subcarriers = 128;
    cfg.snr_db = 0.0;
    cfg.set_uniform_budgets(cfg.n_subcarriers);

    ChannelParams params;
    params.n_clusters = 4;
    params.rays_per_cluster = {5};
    params.n_taps = 32;
    params.beam_squint = true;
    params.bandwidth_hz = 1e9;
    params.carrier_hz = 60e9;

    std::printf("papc kernel benchmark (%d threads available)\n", hardware_threads());

    const int repeats = 3;
    report("channel generation",
           time_ms([&] { generate_channel(cfg, params, 1, Exec::serial); }, repeats),
           time_ms([&] { generate_channel(cfg, params, 1, Exec::openmp); }, repeats));

    const ChannelRealization ch = generate_channel(cfg, params, 1);
    report("per-subcarrier SVD",
           time_ms([&] { channel_svd(ch.freq, cfg.n_streams, Exec::serial); }, repeats),
           time_ms([&] { channel_svd(ch.freq, cfg.n_streams, Exec::openmp); }, repeats));

    const ChannelSvd svd = channel_svd(ch.freq, cfg.n_streams);
    const DigitalDesign upper = design_ppc_upper(svd, cfg);
    report("hybrid factorization",
           time_ms([&] { design_hybrid(ch.freq, upper, cfg, Exec::serial); }, repeats),
           time_ms([&] { design_hybrid(ch.freq, upper, cfg, Exec::openmp); }, repeats));

    return 0;
}

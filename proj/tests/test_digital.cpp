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

#include "papc/digital.hpp"

#include "papc/channel.hpp"
#include "papc/metrics.hpp"
#include "papc/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace papc;

namespace
{

SystemConfig tiny_system(int n_tx, int n_rx, int n_streams, int k_total)
{
    SystemConfig cfg;
    cfg.n_tx = n_tx;
    cfg.n_rx = n_rx;
    cfg.l_tx = std::max(n_streams, std::min(2, n_tx));
    cfg.l_rx = std::max(n_streams, std::min(2, n_rx));
    cfg.n_streams = n_streams;
    cfg.n_subcarriers = k_total;
    cfg.snr_db = 0.0;
    cfg.set_uniform_budgets(1.0);
    return cfg;
}

} // namespace

TEST_CASE("TPC on one subcarrier and one stream is classical waterfilling")
{
    SystemConfig cfg = tiny_system(2, 2, 1, 1);
    cfg.l_tx = cfg.l_rx = 1;
    std::vector<cmat> channels = {cmat::Zero(2, 2)};
    channels[0](0, 0) = 3.0;
    channels[0](1, 1) = 0.5;

    const DigitalDesign design = design_tpc(channels, cfg);
    // Everything lands on the dominant singular direction.
    CHECK(design.allocation.powers(0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(max_abs_diff(design.precoders[0].col(0),
                       cvec::Unit(2, 0) * design.precoders[0](0, 0)) < 1e-12);
}

TEST_CASE("TPC spreads uniformly over equal singular values")
{
    SystemConfig cfg = tiny_system(2, 2, 2, 2);
    std::vector<cmat> channels(2, 2.0 * cmat::Identity(2, 2));
    const DigitalDesign design = design_tpc(channels, cfg);
    const double expected = cfg.n_streams * cfg.budgets.sum() / 4.0;
    for (int m = 0; m < 4; ++m)
        CHECK(design.allocation.powers(m) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("TPC reproduces the two-channel waterfilling point")
{
    SystemConfig cfg = tiny_system(2, 2, 1, 2);
    cfg.l_tx = cfg.l_rx = 1;
    cfg.snr_db = 0.0;
    cfg.budgets = rvec::Constant(2, 0.5); // total budget 1
    std::vector<cmat> channels = {cmat::Zero(2, 2), cmat::Zero(2, 2)};
    channels[0](0, 0) = 2.0; // sigma^2 = 4
    channels[1](0, 0) = 1.0; // sigma^2 = 1

    const DigitalDesign design = design_tpc(channels, cfg);
    CHECK(design.allocation.powers(0) == doctest::Approx(0.875).epsilon(1e-9));
    CHECK(design.allocation.powers(1) == doctest::Approx(0.125).epsilon(1e-9));

    const double total = per_antenna_power(design.precoders, cfg.n_streams).sum();
    CHECK(total == doctest::Approx(cfg.budgets.sum()).epsilon(1e-8));
}

TEST_CASE("relaxed design: single subcarrier takes the whole relaxed budget")
{
    SystemConfig cfg = tiny_system(4, 3, 2, 1);
    Rng rng(3);
    cmat h(3, 4);
    for (int c = 0; c < 4; ++c)
        for (int r = 0; r < 3; ++r) h(r, c) = rng.complex_normal();

    cfg.budgets << 0.7, 1.1, 0.9, 2.0;
    const DigitalDesign design = design_ppc_relaxed({h}, cfg);
    // rho^2 = N_s * p_0 on the only subcarrier, shared by both streams.
    const double expected = cfg.n_streams * cfg.budgets.minCoeff();
    CHECK(design.allocation.powers(0) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(design.allocation.powers(0) == doctest::Approx(design.allocation.powers(1)));
}

TEST_CASE("relaxed design: identical subcarriers share power equally")
{
    SystemConfig cfg = tiny_system(4, 3, 2, 2);
    Rng rng(5);
    cmat h(3, 4);
    for (int c = 0; c < 4; ++c)
        for (int r = 0; r < 3; ++r) h(r, c) = rng.complex_normal();
    std::vector<cmat> channels = {h, h};

    const DigitalDesign design = design_ppc_relaxed(channels, cfg);
    CHECK(design.allocation.powers(0) ==
          doctest::Approx(design.allocation.powers(cfg.n_streams)).epsilon(1e-9));
}

TEST_CASE("relaxed design reduces to waterfilling with the min-budget pool")
{
    SystemConfig cfg = tiny_system(2, 2, 1, 2);
    cfg.l_tx = cfg.l_rx = 1;
    cfg.budgets << 1.0, 7.0; // p_0 = 1
    std::vector<cmat> channels = {cmat::Zero(2, 2), cmat::Zero(2, 2)};
    channels[0](0, 0) = 2.0;
    channels[1](0, 0) = 1.0;

    const DigitalDesign design = design_ppc_relaxed(channels, cfg);
    CHECK(design.allocation.powers(0) == doctest::Approx(0.875).epsilon(1e-9));
    CHECK(design.allocation.powers(1) == doctest::Approx(0.125).epsilon(1e-9));
}

TEST_CASE("upper design with a single antenna equals TPC")
{
    SystemConfig cfg = tiny_system(1, 2, 1, 2);
    cfg.l_tx = cfg.l_rx = 1;
    cfg.budgets = rvec::Constant(1, 1.4);
    std::vector<cmat> channels = {cmat::Zero(2, 1), cmat::Zero(2, 1)};
    channels[0](0, 0) = 2.0;
    channels[1](1, 0) = 1.0;

    const DigitalDesign upper = design_ppc_upper(channels, cfg);
    const DigitalDesign tpc = design_tpc(channels, cfg);
    for (int m = 0; m < 2; ++m)
        CHECK(std::abs(upper.allocation.powers(m) - tpc.allocation.powers(m)) < 1e-8);
}

TEST_CASE("upper design matches TPC when singular directions are perfectly spread")
{
    // V from DFT columns: every |u_jl|^2 = 1/N_t, so the per-antenna rows all
    // equal the scaled total-power constraint.
    const int n = 4;
    SystemConfig cfg = tiny_system(n, n, 2, 2);
    cfg.budgets = rvec::Constant(n, 0.6);

    cmat dft(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            dft(r, c) = std::polar(1.0 / std::sqrt(n), -2.0 * M_PI * r * c / n);

    Rng rng(8);
    std::vector<cmat> channels;
    for (int k = 0; k < 2; ++k)
    {
        rvec sv(n);
        for (int i = 0; i < n; ++i) sv(i) = rng.uniform(0.5, 3.0);
        std::sort(sv.data(), sv.data() + n, std::greater<double>());
        channels.push_back(cmat::Identity(n, n) * sv.asDiagonal() * dft.adjoint());
    }

    const DigitalDesign upper = design_ppc_upper(channels, cfg);
    const DigitalDesign tpc = design_tpc(channels, cfg);
    for (int m = 0; m < upper.allocation.powers.size(); ++m)
        CHECK(std::abs(upper.allocation.powers(m) - tpc.allocation.powers(m)) < 1e-7);
}

TEST_CASE("design invariants and rate ordering on drawn channels")
{
    SystemConfig cfg;
    cfg.n_tx = 8;
    cfg.n_rx = 6;
    cfg.l_tx = 2;
    cfg.l_rx = 2;
    cfg.n_streams = 2;
    cfg.n_subcarriers = 8;
    cfg.snr_db = 5.0;
    cfg.set_uniform_budgets(cfg.n_subcarriers);

    ChannelParams params;
    params.n_clusters = 3;
    params.rays_per_cluster = {4};
    params.n_taps = 4;

    for (int seed = 0; seed < 5; ++seed)
    {
        const ChannelRealization ch = generate_channel(cfg, params, 100 + seed);
        const ChannelSvd svd = channel_svd(ch.freq, cfg.n_streams);
        const DigitalDesign tpc = design_tpc(svd, cfg);
        const DigitalDesign relaxed = design_ppc_relaxed(svd, cfg);
        const DigitalDesign upper = design_ppc_upper(svd, cfg);

        for (const DigitalDesign* design : {&tpc, &relaxed, &upper})
        {
            for (int k = 0; k < cfg.n_subcarriers; ++k)
            {
                // directions orthonormal, precoder factors exactly
                CHECK(max_abs_diff(design->directions[k].adjoint() * design->directions[k],
                                   cmat::Identity(cfg.n_streams, cfg.n_streams)) < 1e-10);
                const rvec amp = design->allocation.powers
                                     .segment(k * cfg.n_streams, cfg.n_streams)
                                     .cwiseSqrt();
                CHECK(max_abs_diff(design->precoders[k],
                                   design->directions[k] * amp.asDiagonal()) == 0.0);
            }
        }

        // Per-antenna feasibility for the PPC designs.
        for (const DigitalDesign* design : {&relaxed, &upper})
        {
            const rvec power = per_antenna_power(design->precoders, cfg.n_streams);
            for (int j = 0; j < cfg.n_tx; ++j)
                CHECK(power(j) <= cfg.budgets(j) + 1e-8 * cfg.budgets(j));
        }

        const double snr = cfg.snr_linear();
        const double r_tpc =
            spectral_efficiency(ch.freq, tpc.precoders, tpc.combiners, snr, cfg.n_streams);
        const double r_relaxed = spectral_efficiency(ch.freq, relaxed.precoders,
                                                     relaxed.combiners, snr, cfg.n_streams);
        const double r_upper =
            spectral_efficiency(ch.freq, upper.precoders, upper.combiners, snr, cfg.n_streams);
        CHECK(r_relaxed <= r_upper + 1e-6);
        CHECK(r_upper <= r_tpc + 1e-6);

        // TPC exhausts its total budget.
        const double total = per_antenna_power(tpc.precoders, cfg.n_streams).sum();
        CHECK(total == doctest::Approx(cfg.budgets.sum()).epsilon(1e-8));
    }
}

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

#include "papc/channel.hpp"

#include "papc/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace papc;

namespace
{

SystemConfig small_system()
{
    SystemConfig cfg;
    cfg.n_tx = 8;
    cfg.n_rx = 4;
    cfg.l_tx = 2;
    cfg.l_rx = 2;
    cfg.n_streams = 2;
    cfg.n_subcarriers = 16;
    cfg.set_uniform_budgets(cfg.n_subcarriers);
    return cfg;
}

ChannelParams small_params()
{
    ChannelParams params;
    params.n_clusters = 2;
    params.rays_per_cluster = {3};
    params.n_taps = 8;
    params.rolloff = 0.8;
    return params;
}

} // namespace

TEST_CASE("steering vector closed forms")
{
    const cvec broadside = steering_vector(4, M_PI / 2.0, 1.0);
    for (int m = 0; m < 4; ++m) CHECK(std::abs(broadside(m) - cd(0.5, 0.0)) < 1e-14);

    const cvec endfire = steering_vector(2, 0.0, 1.0);
    CHECK(std::abs(endfire(0) - cd(1.0 / std::sqrt(2.0), 0.0)) < 1e-14);
    CHECK(std::abs(endfire(1) - cd(-1.0 / std::sqrt(2.0), 0.0)) < 1e-14);

    const cvec oblique = steering_vector(8, M_PI / 3.0, 1.0);
    for (int m = 0; m < 8; ++m)
    {
        const cd expected = std::polar(1.0 / std::sqrt(8.0), m * M_PI / 2.0);
        CHECK(std::abs(oblique(m) - expected) < 1e-12);
    }

    for (int n : {1, 3, 17})
        CHECK(steering_vector(n, 1.234, 1.1).norm() == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(steering_vector(4, std::numeric_limits<double>::quiet_NaN(), 1.0),
                    std::invalid_argument);
}

TEST_CASE("raised cosine peak, zero crossings and singular point")
{
    for (double beta : {0.0, 0.3, 1.0}) CHECK(raised_cosine(0.0, 1e-9, beta) == 1.0);
    for (int m : {1, -1, 2, 5})
        CHECK(std::abs(raised_cosine(m * 1e-9, 1e-9, 0.4)) < 1e-12);
    // analytic limit at |t| = T_s / (2 beta)
    CHECK(raised_cosine(0.5e-9, 1e-9, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(raised_cosine(-0.5e-9, 1e-9, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("single forced path reproduces the rank-one tap")
{
    SystemConfig cfg = small_system();
    ChannelParams params = small_params();
    params.n_clusters = 1;
    params.rays_per_cluster = {1};
    params.pathloss = 1.0;

    PathEntry path;
    path.gain = cd(1.0, 0.0);
    path.delay = 0.0;
    path.aoa = 0.7;
    path.aod = 2.1;

    const auto taps = taps_from_paths({path}, cfg, params);
    const cmat expected = std::sqrt(static_cast<double>(cfg.n_tx) * cfg.n_rx) *
                          steering_vector(cfg.n_rx, path.aoa) *
                          steering_vector(cfg.n_tx, path.aod).adjoint();
    CHECK(max_abs_diff(taps[0], expected) < 1e-12);

    // Other taps only carry raised-cosine tails.
    const double ts = params.effective_sample_period();
    for (int d = 1; d < params.n_taps; ++d)
    {
        const double tail = std::abs(raised_cosine(d * ts, ts, params.rolloff));
        CHECK(taps[d].cwiseAbs().maxCoeff() <=
              std::sqrt(static_cast<double>(cfg.n_tx) * cfg.n_rx) * tail + 1e-12);
    }
}

TEST_CASE("generate_channel is bit-deterministic in the seed")
{
    const SystemConfig cfg = small_system();
    const ChannelParams params = small_params();
    const ChannelRealization a = generate_channel(cfg, params, 42);
    const ChannelRealization b = generate_channel(cfg, params, 42);
    REQUIRE(a.taps.size() == b.taps.size());
    for (size_t d = 0; d < a.taps.size(); ++d)
        CHECK((a.taps[d].array() == b.taps[d].array()).all());
    for (size_t k = 0; k < a.freq.size(); ++k)
        CHECK((a.freq[k].array() == b.freq[k].array()).all());
    REQUIRE(a.paths.size() == b.paths.size());

    const ChannelRealization c = generate_channel(cfg, params, 43);
    CHECK(max_abs_diff(a.freq[0], c.freq[0]) > 1e-12);
}

TEST_CASE("infinite Rician factor collapses the channel to rank one")
{
    SystemConfig cfg = small_system();
    ChannelParams params = small_params();
    params.rician_factor_db = std::numeric_limits<double>::infinity();

    const ChannelRealization ch = generate_channel(cfg, params, 11);
    for (const cmat& h : ch.freq)
    {
        Eigen::JacobiSVD<cmat> svd(h);
        if (svd.singularValues()(0) < 1e-12) continue; // pulse null, nothing to check
        CHECK(svd.singularValues()(1) < 1e-9 * svd.singularValues()(0));
    }
}

TEST_CASE("first-path power fraction tracks KF/(KF+1)")
{
    SystemConfig cfg = small_system();
    ChannelParams params = small_params();
    params.rician_factor_db = 0.0; // KF = 1 -> fraction 1/2

    double first = 0.0, total = 0.0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i)
    {
        const auto paths = draw_paths(cfg, params, 1000 + i);
        for (size_t p = 0; p < paths.size(); ++p)
        {
            const double power = std::norm(paths[p].gain);
            total += power;
            if (p == 0) first += power;
        }
    }
    CHECK(first / total == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("drawn delays stay inside the tap window")
{
    SystemConfig cfg = small_system();
    ChannelParams params = small_params();
    const double ts = params.effective_sample_period();
    for (int seed = 0; seed < 50; ++seed)
        for (const PathEntry& p : draw_paths(cfg, params, seed))
        {
            CHECK(p.delay >= 0.0);
            CHECK(p.delay <= (params.n_taps - 1) * ts);
        }
}

TEST_CASE("freq_response of impulse and shifted impulse")
{
    Rng rng(9);
    cmat h0(2, 3);
    for (int c = 0; c < 3; ++c)
        for (int r = 0; r < 2; ++r) h0(r, c) = rng.complex_normal();

    SUBCASE("single tap at d = 0")
    {
        const auto freq = freq_response({h0}, 8);
        for (const cmat& h : freq) CHECK(max_abs_diff(h, h0) < 1e-12);
    }

    SUBCASE("single nonzero tap at d = 1, K = 4")
    {
        const auto freq = freq_response({cmat::Zero(2, 3), h0}, 4);
        for (int k = 0; k < 4; ++k)
        {
            const cmat expected = h0 * std::polar(1.0, -M_PI * k / 2.0);
            CHECK(max_abs_diff(freq[k], expected) < 1e-12);
        }
    }

    SUBCASE("K below the tap count is rejected")
    {
        CHECK_THROWS_AS(freq_response(std::vector<cmat>(5, h0), 4), std::invalid_argument);
    }
}

TEST_CASE("Parseval identity between taps and frequency responses")
{
    const SystemConfig cfg = small_system();
    const ChannelParams params = small_params();
    const ChannelRealization ch = generate_channel(cfg, params, 77);

    double tap_energy = 0.0, freq_energy = 0.0;
    for (const cmat& h : ch.taps) tap_energy += h.squaredNorm();
    for (const cmat& h : ch.freq) freq_energy += h.squaredNorm();
    CHECK(freq_energy ==
          doctest::Approx(cfg.n_subcarriers * tap_energy).epsilon(1e-9));
}

TEST_CASE("beam-squint response reduces to the tap DFT as B -> 0")
{
    SystemConfig cfg = small_system();
    ChannelParams params = small_params();
    params.beam_squint = true;
    params.carrier_hz = 60e9;

    const auto paths = draw_paths(cfg, params, 5);
    const auto taps = taps_from_paths(paths, cfg, params);
    const auto reference = freq_response(taps, cfg.n_subcarriers);

    ChannelParams narrow = params;
    narrow.bandwidth_hz = 1.0; // vanishing fractional bandwidth
    narrow.sample_period = params.effective_sample_period();
    const auto squint = freq_response_squint(paths, cfg, narrow);
    for (int k = 0; k < cfg.n_subcarriers; ++k)
        CHECK(max_abs_diff(squint[k], reference[k]) < 1e-10);
}

TEST_CASE("center subcarrier is squint-free")
{
    SystemConfig cfg = small_system();
    ChannelParams params = small_params();
    params.beam_squint = true;
    params.n_clusters = 1;
    params.rays_per_cluster = {1};
    params.bandwidth_hz = 3e9;
    params.carrier_hz = 60e9;

    const auto paths = draw_paths(cfg, params, 2);
    const auto taps = taps_from_paths(paths, cfg, params);
    const auto reference = freq_response(taps, cfg.n_subcarriers);
    const auto squint = freq_response_squint(paths, cfg, params);
    CHECK(max_abs_diff(squint[cfg.n_subcarriers / 2], reference[cfg.n_subcarriers / 2]) < 1e-10);

    ChannelParams missing = params;
    missing.carrier_hz = 0.0;
    CHECK_THROWS_AS(freq_response_squint(paths, cfg, missing), std::invalid_argument);
}

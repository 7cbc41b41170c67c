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

#include "papc/metrics.hpp"

#include "papc/channel.hpp"
#include "papc/digital.hpp"
#include "papc/hybrid.hpp"
#include "papc/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace papc;

namespace
{

cmat random_complex(int rows, int cols, Rng& rng)
{
    cmat m(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r) m(r, c) = rng.complex_normal();
    return m;
}

} // namespace

TEST_CASE("spectral efficiency scalar cases")
{
    SUBCASE("zero precoder gives zero rate")
    {
        Rng rng(1);
        const std::vector<cmat> h = {random_complex(3, 2, rng)};
        const std::vector<cmat> f = {cmat::Zero(2, 1)};
        const std::vector<cmat> w = {random_complex(3, 1, rng)};
        CHECK(spectral_efficiency(h, f, w, 1.0, 1) == 0.0);
    }

    SUBCASE("1x1 link, combiner scale cancels")
    {
        const std::vector<cmat> h = {cmat::Constant(1, 1, cd(1.0, 0.0))};
        const std::vector<cmat> f = {cmat::Constant(1, 1, cd(std::sqrt(2.0), 0.0))};
        const std::vector<cmat> w = {cmat::Constant(1, 1, cd(5.0, 0.0))};
        CHECK(spectral_efficiency(h, f, w, 1.0, 1) ==
              doctest::Approx(std::log2(3.0)).epsilon(1e-12));
    }

    SUBCASE("non-finite inputs are rejected")
    {
        const std::vector<cmat> h = {cmat::Constant(1, 1, cd(std::nan(""), 0.0))};
        const std::vector<cmat> f = {cmat::Identity(1, 1)};
        CHECK_THROWS_AS(spectral_efficiency(h, f, f, 1.0, 1), std::invalid_argument);
    }
}

TEST_CASE("spectral efficiency is invariant to invertible combiner recombination")
{
    Rng rng(42);
    const int k_total = 4;
    std::vector<cmat> h, f, w, w_mixed;
    for (int k = 0; k < k_total; ++k)
    {
        h.push_back(random_complex(4, 6, rng));
        f.push_back(random_complex(6, 2, rng));
        w.push_back(random_complex(4, 2, rng));
        cmat r = random_complex(2, 2, rng);
        r += 2.0 * cmat::Identity(2, 2); // keep it comfortably invertible
        w_mixed.push_back(w.back() * r);
    }
    const double base = spectral_efficiency(h, f, w, 2.0, 2);
    const double mixed = spectral_efficiency(h, f, w_mixed, 2.0, 2);
    CHECK(std::abs(base - mixed) < 1e-9);
}

TEST_CASE("spectral efficiency grows with SNR")
{
    Rng rng(43);
    const std::vector<cmat> h = {random_complex(4, 4, rng)};
    const std::vector<cmat> f = {random_complex(4, 2, rng)};
    const std::vector<cmat> w = {random_complex(4, 2, rng)};
    double previous = 0.0;
    for (double snr_db : {-10.0, -5.0, 0.0, 5.0, 10.0})
    {
        const double rate = spectral_efficiency(h, f, w, std::pow(10.0, snr_db / 10.0), 2);
        CHECK(rate >= previous);
        previous = rate;
    }
}

TEST_CASE("per-antenna power bookkeeping")
{
    SUBCASE("two subcarriers on one antenna")
    {
        cmat f(2, 1);
        f << cd(1, 0), cd(0, 0);
        const rvec power = per_antenna_power({f, f}, 1);
        CHECK(power(0) == doctest::Approx(2.0));
        CHECK(power(1) == 0.0);
    }

    SUBCASE("total equals the Frobenius decomposition")
    {
        Rng rng(9);
        std::vector<cmat> f;
        double frob = 0.0;
        for (int k = 0; k < 3; ++k)
        {
            f.push_back(random_complex(5, 2, rng));
            frob += f.back().squaredNorm();
        }
        CHECK(per_antenna_power(f, 2).sum() == doctest::Approx(frob / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("chordal distance closed forms")
{
    Rng rng(11);
    const cmat q = orthonormal_columns(random_complex(5, 2, rng));
    CHECK(chordal_distance(q, q) == doctest::Approx(0.0));

    cmat a = cmat::Zero(4, 2), b = cmat::Zero(4, 2);
    a.col(0) = cvec::Unit(4, 0);
    a.col(1) = cvec::Unit(4, 1);
    b.col(0) = cvec::Unit(4, 2);
    b.col(1) = cvec::Unit(4, 3);
    CHECK(chordal_distance(a, b) == doctest::Approx(std::sqrt(2.0)));

    cmat e1 = cmat::Zero(3, 1), mix = cmat::Zero(3, 1);
    e1(0, 0) = 1.0;
    mix(0, 0) = mix(1, 0) = 1.0 / std::sqrt(2.0);
    CHECK(chordal_distance(e1, mix) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

    CHECK_THROWS_AS(chordal_distance(e1, a), std::invalid_argument);
}

TEST_CASE("subspace quality bounds and monotonicity")
{
    SystemConfig cfg;
    cfg.n_tx = 8;
    cfg.n_rx = 6;
    cfg.l_tx = 2;
    cfg.l_rx = 2;
    cfg.n_streams = 2;
    cfg.n_subcarriers = 16;
    cfg.set_uniform_budgets(cfg.n_subcarriers);
    ChannelParams params;
    params.n_clusters = 3;
    params.rays_per_cluster = {4};
    params.n_taps = 8;

    const ChannelRealization ch = generate_channel(cfg, params, 2024);
    const int d_max = std::min(cfg.n_tx, cfg.n_rx);
    const SubspaceBases bases = channel_subspace_bases(ch.freq, d_max);

    double previous = 0.0;
    for (int d = 1; d <= d_max; ++d)
    {
        const double gamma = subspace_quality(ch.freq, bases.u_rx, bases.u_tx, d);
        CHECK(gamma >= previous - 1e-12);
        CHECK(gamma <= 1.0 + 1e-12);
        previous = gamma;
    }

    SUBCASE("square channel: full unitary bases capture everything")
    {
        SystemConfig square = cfg;
        square.n_tx = square.n_rx = 6;
        square.set_uniform_budgets(square.n_subcarriers);
        const ChannelRealization sq = generate_channel(square, params, 2025);
        const SubspaceBases full = channel_subspace_bases(sq.freq, 6);
        CHECK(subspace_quality(sq.freq, full.u_rx, full.u_tx, 6) ==
              doctest::Approx(1.0).epsilon(1e-9));
    }

    SUBCASE("single flat path is captured by one dimension")
    {
        ChannelParams flat = params;
        flat.n_clusters = 1;
        flat.rays_per_cluster = {1};
        flat.n_taps = 1;
        const ChannelRealization single = generate_channel(cfg, flat, 7);
        const SubspaceBases b1 = channel_subspace_bases(single.freq, 1);
        CHECK(subspace_quality(single.freq, b1.u_rx, b1.u_tx, 1) ==
              doctest::Approx(1.0).epsilon(1e-9));
    }

    SUBCASE("zero channel is rejected")
    {
        const std::vector<cmat> zeros = {cmat::Zero(4, 4)};
        const cmat basis = cmat::Identity(4, 2);
        CHECK_THROWS_AS(subspace_quality(zeros, basis, basis, 2), std::invalid_argument);
    }
}

TEST_CASE("empirical CCDF")
{
    SUBCASE("point masses")
    {
        rvec grid(3);
        grid << 0.0, 1.0, 2.0;
        const rvec ccdf = empirical_ccdf({1.0, 1.0, 1.0}, grid);
        CHECK(ccdf(0) == 1.0);
        CHECK(ccdf(1) == 0.0);
        CHECK(ccdf(2) == 0.0);
    }

    SUBCASE("half the mass above the threshold")
    {
        rvec grid(1);
        grid << 2.5;
        CHECK(empirical_ccdf({1.0, 2.0, 3.0, 4.0}, grid)(0) == 0.5);
    }

    SUBCASE("matches the uniform law within Monte Carlo noise")
    {
        Rng rng(77);
        std::vector<double> samples(10000);
        for (double& s : samples) s = rng.uniform();
        rvec grid(1);
        grid << 0.3;
        CHECK(empirical_ccdf(samples, grid)(0) == doctest::Approx(0.7).epsilon(0.03));
    }

    SUBCASE("empty samples are rejected")
    {
        CHECK_THROWS_AS(empirical_ccdf({}, rvec::Zero(1)), std::invalid_argument);
    }
}

TEST_CASE("trial metrics bundle: digital designs sit on their own bases")
{
    SystemConfig cfg;
    cfg.n_tx = 8;
    cfg.n_rx = 6;
    cfg.l_tx = 2;
    cfg.l_rx = 2;
    cfg.n_streams = 2;
    cfg.n_subcarriers = 8;
    cfg.snr_db = 20.0; // high SNR keeps every stream powered
    cfg.set_uniform_budgets(cfg.n_subcarriers);
    ChannelParams params;
    params.n_clusters = 3;
    params.rays_per_cluster = {4};
    params.n_taps = 4;

    const ChannelRealization ch = generate_channel(cfg, params, 314);
    const DigitalDesign upper = design_ppc_upper(ch.freq, cfg);

    const TrialMetrics metrics =
        evaluate_trial(ch.freq, upper.precoders, upper.combiners, upper.directions,
                       upper.rx_directions, cfg.snr_linear(), cfg.n_streams, cfg.n_streams);

    CHECK(metrics.rate_bits > 0.0);
    CHECK(metrics.gamma >= 0.0);
    CHECK(metrics.gamma <= 1.0 + 1e-12);
    CHECK((metrics.antenna_powers.array() >= 0.0).all());
    // The all-digital precoders span exactly the reference singular bases
    // (the sqrt in the metric floors tiny distances near sqrt(eps)).
    CHECK(metrics.chordal_tx.maxCoeff() < 1e-6);
    CHECK(metrics.chordal_rx.maxCoeff() < 1e-6);

    const DigitalDesign tpc = design_tpc(ch.freq, cfg);
    const HybridDesign hybrid = design_hybrid(ch.freq, upper, cfg);
    const TrialMetrics hybrid_metrics =
        evaluate_trial(ch.freq, hybrid.precoders(), hybrid.combiners(), upper.directions,
                       upper.rx_directions, cfg.snr_linear(), cfg.n_streams, cfg.n_streams);
    // The quantized factorization cannot match the references exactly.
    CHECK(hybrid_metrics.chordal_tx.maxCoeff() > 1e-6);
    CHECK(hybrid_metrics.rate_bits <= metrics.rate_bits + 1e-6);
    (void)tpc;
}

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

#include <cmath>
#include <stdexcept>

namespace papc
{

namespace
{

double sinc(double x)
{
    if (std::abs(x) < 1e-12) return 1.0;
    const double px = M_PI * x;
    return std::sin(px) / px;
}

double path_scale(const SystemConfig& cfg, const ChannelParams& params)
{
    return std::sqrt(static_cast<double>(cfg.n_tx) * cfg.n_rx /
                     (params.pathloss * params.total_rays()));
}

int rays_in_cluster(const ChannelParams& params, int cluster)
{
    return static_cast<int>(params.rays_per_cluster.size()) == 1 ? params.rays_per_cluster[0]
                                                                 : params.rays_per_cluster[cluster];
}

} // namespace

cvec steering_vector(int n_antennas, double angle, double freq_ratio)
{
    if (n_antennas < 1) throw std::invalid_argument("steering_vector: n_antennas must be >= 1");
    if (!std::isfinite(angle)) throw std::invalid_argument("steering_vector: angle must be finite");
    if (!(freq_ratio > 0.0)) throw std::invalid_argument("steering_vector: freq_ratio must be positive");

    const double norm = 1.0 / std::sqrt(static_cast<double>(n_antennas));
    const double step = M_PI * freq_ratio * std::cos(angle);
    cvec a(n_antennas);
    for (int m = 0; m < n_antennas; ++m) a(m) = norm * std::polar(1.0, m * step);
    return a;
}

double raised_cosine(double t, double sample_period, double rolloff)
{
    const double x = t / sample_period;
    if (rolloff > 0.0)
    {
        const double bx2 = 2.0 * rolloff * x;
        const double denom = 1.0 - bx2 * bx2;
        if (std::abs(denom) < 1e-8)
            return (M_PI / 4.0) * sinc(1.0 / (2.0 * rolloff));
        return sinc(x) * std::cos(M_PI * rolloff * x) / denom;
    }
    return sinc(x);
}

std::vector<cmat> taps_from_paths(const std::vector<PathEntry>& paths, const SystemConfig& cfg,
                                  const ChannelParams& params, Exec exec)
{
    const double ts = params.effective_sample_period();
    const double scale = path_scale(cfg, params);

    std::vector<cmat> taps(params.n_taps);
    parallel_for(exec, params.n_taps, [&](int d) {
        cmat h = cmat::Zero(cfg.n_rx, cfg.n_tx);
        for (const PathEntry& p : paths)
        {
            const double pulse = raised_cosine(d * ts - p.delay, ts, params.rolloff);
            if (pulse == 0.0) continue;
            const cvec ar = steering_vector(cfg.n_rx, p.aoa);
            const cvec at = steering_vector(cfg.n_tx, p.aod);
            h.noalias() += (scale * p.gain * pulse) * (ar * at.adjoint());
        }
        taps[d] = std::move(h);
    });
    return taps;
}

std::vector<cmat> freq_response(const std::vector<cmat>& taps, int n_subcarriers)
{
    const int n_taps = static_cast<int>(taps.size());
    if (n_taps == 0) throw std::invalid_argument("freq_response: no taps");
    if (n_subcarriers < n_taps)
        throw std::invalid_argument("freq_response: n_subcarriers must be >= number of taps");

    const Eigen::Index rows = taps[0].rows();
    const Eigen::Index cols = taps[0].cols();

    // One DFT over the tap axis for all matrix entries at once.
    cmat stacked(n_taps, rows * cols);
    for (int d = 0; d < n_taps; ++d)
        stacked.row(d) = Eigen::Map<const cvec>(taps[d].data(), rows * cols).transpose();

    cmat twiddle(n_subcarriers, n_taps);
    for (int k = 0; k < n_subcarriers; ++k)
        for (int d = 0; d < n_taps; ++d)
            twiddle(k, d) = std::polar(1.0, -2.0 * M_PI * k * d / n_subcarriers);

    const cmat spectrum = twiddle * stacked;

    std::vector<cmat> freq(n_subcarriers);
    for (int k = 0; k < n_subcarriers; ++k)
    {
        const cvec row = spectrum.row(k).transpose();
        freq[k] = Eigen::Map<const cmat>(row.data(), rows, cols);
    }
    return freq;
}

std::vector<cmat> freq_response_squint(const std::vector<PathEntry>& paths, const SystemConfig& cfg,
                                       const ChannelParams& params, Exec exec)
{
    if (!(params.carrier_hz > 0.0) || !(params.bandwidth_hz > 0.0))
        throw std::invalid_argument("freq_response_squint: carrier_hz and bandwidth_hz must be set");

    const int n_paths = static_cast<int>(paths.size());
    const int k_total = cfg.n_subcarriers;
    const double ts = params.effective_sample_period();
    const double scale = path_scale(cfg, params);

    // Per-path frequency gains aggregate the pulse tails over the delay grid.
    cmat gains(k_total, n_paths);
    for (int p = 0; p < n_paths; ++p)
    {
        cvec pulse_dft = cvec::Zero(k_total);
        for (int d = 0; d < params.n_taps; ++d)
        {
            const double pulse = raised_cosine(d * ts - paths[p].delay, ts, params.rolloff);
            if (pulse == 0.0) continue;
            for (int k = 0; k < k_total; ++k)
                pulse_dft(k) += pulse * std::polar(1.0, -2.0 * M_PI * k * d / k_total);
        }
        gains.col(p) = (scale * paths[p].gain) * pulse_dft;
    }

    std::vector<cmat> freq(k_total);
    parallel_for(exec, k_total, [&](int k) {
        const double f_ratio =
            1.0 + (params.bandwidth_hz / params.carrier_hz) *
                      (static_cast<double>(k) / k_total - 0.5);
        cmat a_rx(cfg.n_rx, n_paths);
        cmat a_tx(cfg.n_tx, n_paths);
        for (int p = 0; p < n_paths; ++p)
        {
            a_rx.col(p) = steering_vector(cfg.n_rx, paths[p].aoa, f_ratio);
            a_tx.col(p) = steering_vector(cfg.n_tx, paths[p].aod, f_ratio);
        }
        freq[k] = a_rx * gains.row(k).transpose().asDiagonal() * a_tx.adjoint();
    });
    return freq;
}

std::vector<PathEntry> draw_paths(const SystemConfig& cfg, const ChannelParams& params,
                                  std::uint64_t seed)
{
    cfg.validate();
    params.validate();

    Rng rng(seed);
    const double ts = params.effective_sample_period();
    const double max_delay_norm = static_cast<double>(params.n_taps - 1);
    const double spread_rad = params.angular_spread_deg * M_PI / 180.0;

    std::vector<PathEntry> paths;
    paths.reserve(params.total_rays());
    for (int c = 0; c < params.n_clusters; ++c)
    {
        const double center_aoa = rng.uniform(0.0, 2.0 * M_PI);
        const double center_aod = rng.uniform(0.0, 2.0 * M_PI);
        const double cluster_delay_norm = rng.uniform(0.0, 0.75 * max_delay_norm);
        for (int r = 0; r < rays_in_cluster(params, c); ++r)
        {
            PathEntry p;
            p.gain = rng.complex_normal();
            p.aoa = center_aoa + spread_rad * rng.normal();
            p.aod = center_aod + spread_rad * rng.normal();
            double delay_norm = cluster_delay_norm + std::abs(rng.normal()) * 2.0;
            delay_norm = std::min(std::max(delay_norm, 0.0), max_delay_norm);
            p.delay = delay_norm * ts;
            p.cluster = c;
            paths.push_back(p);
        }
    }

    // Rician weighting: the first path gets a KF/(KF+1) share of the expected
    // power, the diffuse paths share the rest; total expected power stays at
    // one unit per path so the model scaling is unchanged.
    const int n_paths = static_cast<int>(paths.size());
    if (n_paths > 1)
    {
        double los_factor, nlos_factor;
        if (std::isinf(params.rician_factor_db) && params.rician_factor_db > 0)
        {
            los_factor = std::sqrt(static_cast<double>(n_paths));
            nlos_factor = 0.0;
        }
        else
        {
            const double kf = std::pow(10.0, params.rician_factor_db / 10.0);
            los_factor = std::sqrt(n_paths * kf / (kf + 1.0));
            nlos_factor = std::sqrt(n_paths / ((kf + 1.0) * (n_paths - 1)));
        }
        paths[0].gain *= los_factor;
        for (int i = 1; i < n_paths; ++i) paths[i].gain *= nlos_factor;
    }

    for (const PathEntry& p : paths)
        if (p.delay > (params.n_taps - 1) * ts + 1e-12)
            throw std::logic_error("draw_paths: drawn delay exceeds the tap window");

    return paths;
}

ChannelRealization generate_channel(const SystemConfig& cfg, const ChannelParams& params,
                                    std::uint64_t seed, Exec exec)
{
    ChannelRealization out;
    out.paths = draw_paths(cfg, params, seed);
    out.taps = taps_from_paths(out.paths, cfg, params, exec);
    out.freq = params.beam_squint ? freq_response_squint(out.paths, cfg, params, exec)
                                  : freq_response(out.taps, cfg.n_subcarriers);
    return out;
}

} // namespace papc

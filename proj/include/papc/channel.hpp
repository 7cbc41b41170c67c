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

#ifndef PAPC_CHANNEL_HPP
#define PAPC_CHANNEL_HPP

#include "papc/linalg.hpp"
#include "papc/parallel.hpp"
#include "papc/types.hpp"

#include <cstdint>
#include <vector>

namespace papc
{

/// One propagation path of the clustered geometric model.
struct PathEntry
{
    cd gain;           // complex gain alpha
    double delay;      // seconds, in [0, (n_taps - 1) * T_s]
    double aoa;        // radians
    double aod;        // radians
    int cluster = 0;
};

/// A drawn channel: delay-domain taps, per-subcarrier responses, and the
/// path table they were built from.
struct ChannelRealization
{
    std::vector<cmat> taps; // n_taps matrices, n_rx x n_tx
    std::vector<cmat> freq; // n_subcarriers matrices, n_rx x n_tx
    std::vector<PathEntry> paths;
};

/// ULA steering vector with half-wavelength spacing at the carrier: entry m
/// is exp(j m pi f_ratio cos(angle)) / sqrt(n). f_ratio = f_k / f_c models
/// beam-squint; 1 when squint is disabled.
cvec steering_vector(int n_antennas, double angle, double freq_ratio = 1.0);

/// Raised-cosine pulse value at time t. Total function: the removable
/// singularity at |t| = T_s / (2 beta) is evaluated by its limit.
double raised_cosine(double t, double sample_period, double rolloff);

/// Delay taps from an explicit path table: pulse-shaped rank-one outer
/// products with the sqrt(NtNr / (pathloss * n_paths)) scaling.
std::vector<cmat> taps_from_paths(const std::vector<PathEntry>& paths, const SystemConfig& cfg,
                                  const ChannelParams& params, Exec exec = Exec::serial);

/// Per-subcarrier responses as the K-point DFT of the taps.
/// Requires n_subcarriers >= number of taps.
std::vector<cmat> freq_response(const std::vector<cmat>& taps, int n_subcarriers);

/// Per-subcarrier responses with frequency-dependent steering vectors,
/// evaluated at f_k = f_c + B (k/K - 1/2).
std::vector<cmat> freq_response_squint(const std::vector<PathEntry>& paths, const SystemConfig& cfg,
                                       const ChannelParams& params, Exec exec = Exec::serial);

/// Draws the path table (angles, delays, gains, Rician weighting) for a
/// seed. Delays are generated in units of T_s, so the same seed yields the
/// same normalized geometry at any bandwidth.
std::vector<PathEntry> draw_paths(const SystemConfig& cfg, const ChannelParams& params,
                                  std::uint64_t seed);

/// Full realization: draw paths, build taps and frequency responses
/// (squint-aware when params.beam_squint). Deterministic in (cfg, params,
/// seed).
ChannelRealization generate_channel(const SystemConfig& cfg, const ChannelParams& params,
                                    std::uint64_t seed, Exec exec = Exec::serial);

} // namespace papc

#endif

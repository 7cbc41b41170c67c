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

#ifndef PAPC_TYPES_HPP
#define PAPC_TYPES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace papc
{

/// Link-level configuration: array sizes, RF chains, subcarriers and the
/// per-antenna power budgets p_j.
struct SystemConfig
{
    int n_tx = 64;           // transmit antennas
    int n_rx = 32;           // receive antennas
    int l_tx = 4;            // transmit RF chains
    int l_rx = 4;            // receive RF chains
    int n_streams = 2;       // data streams per subcarrier
    int n_subcarriers = 256; // OFDM subcarriers, power of two
    double snr_db = 0.0;     // receive SNR = P_tx / sigma^2, in dB
    int q_bits_tx = 4;       // phase-shifter quantization bits, transmitter
    int q_bits_rx = 4;       // phase-shifter quantization bits, receiver
    Eigen::VectorXd budgets; // per-antenna power budgets, length n_tx

    double snr_linear() const { return std::pow(10.0, snr_db / 10.0); }

    /// Uniform budgets summing to `total` (default: one unit per subcarrier).
    void set_uniform_budgets(double total)
    {
        budgets = Eigen::VectorXd::Constant(n_tx, total / n_tx);
    }

    void validate() const;
};

/// Clustered geometric channel parameters.
struct ChannelParams
{
    int n_clusters = 4;
    std::vector<int> rays_per_cluster = {5, 5, 5, 5}; // broadcast if size 1
    int n_taps = 64;
    double sample_period = 0.0; // seconds; 0 means 1 / bandwidth_hz
    double rolloff = 0.8;       // raised-cosine beta in [0, 1]
    double pathloss = 1.0;
    double rician_factor_db = 0.0; // +inf collapses all power onto one path
    double angular_spread_deg = 5.0;
    double bandwidth_hz = 1e9;
    double carrier_hz = 60e9;
    bool beam_squint = false;

    int total_rays() const;
    double effective_sample_period() const
    {
        return sample_period > 0.0 ? sample_period : 1.0 / bandwidth_hz;
    }

    void validate() const;
};

inline void SystemConfig::validate() const
{
    auto fail = [](const std::string& what) { throw std::invalid_argument("SystemConfig: " + what); };
    if (n_tx < 1 || n_rx < 1) fail("antenna counts must be positive");
    if (l_tx < 1 || l_rx < 1) fail("RF chain counts must be positive");
    if (n_streams < 1) fail("n_streams must be positive");
    if (n_streams > std::min(l_tx, l_rx)) fail("n_streams must not exceed min(l_tx, l_rx)");
    if (std::min(l_tx, l_rx) > std::min(n_tx, n_rx)) fail("RF chains must not exceed antenna counts");
    if (n_subcarriers < 1 || (n_subcarriers & (n_subcarriers - 1)) != 0)
        fail("n_subcarriers must be a power of two");
    if (q_bits_tx < 1 || q_bits_rx < 1) fail("quantization bits must be positive");
    if (budgets.size() != n_tx) fail("budgets must have one entry per transmit antenna");
    if ((budgets.array() <= 0.0).any()) fail("budgets must be strictly positive");
}

inline int ChannelParams::total_rays() const
{
    if (rays_per_cluster.empty()) return 0;
    if (static_cast<int>(rays_per_cluster.size()) == 1) return n_clusters * rays_per_cluster[0];
    int sum = 0;
    for (int r : rays_per_cluster) sum += r;
    return sum;
}

inline void ChannelParams::validate() const
{
    auto fail = [](const std::string& what) { throw std::invalid_argument("ChannelParams: " + what); };
    if (n_clusters < 1) fail("n_clusters must be positive");
    if (rays_per_cluster.empty()) fail("rays_per_cluster must be nonempty");
    if (static_cast<int>(rays_per_cluster.size()) != 1 &&
        static_cast<int>(rays_per_cluster.size()) != n_clusters)
        fail("rays_per_cluster must have one entry, or one per cluster");
    for (int r : rays_per_cluster)
        if (r < 1) fail("rays_per_cluster entries must be positive");
    if (n_taps < 1) fail("n_taps must be at least 1");
    if (rolloff < 0.0 || rolloff > 1.0) fail("rolloff must be in [0, 1]");
    if (pathloss <= 0.0) fail("pathloss must be positive");
    if (angular_spread_deg <= 0.0) fail("angular_spread_deg must be positive");
    if (bandwidth_hz <= 0.0) fail("bandwidth_hz must be positive");
    if (carrier_hz <= 0.0) fail("carrier_hz must be positive");
    if (sample_period < 0.0) fail("sample_period must be nonnegative");
}

} // namespace papc

#endif

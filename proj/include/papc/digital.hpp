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

#ifndef PAPC_DIGITAL_HPP
#define PAPC_DIGITAL_HPP

#include "papc/parallel.hpp"
#include "papc/solver.hpp"
#include "papc/types.hpp"

#include <vector>

namespace papc
{

/// Truncated per-subcarrier channel SVDs shared by all designs.
struct ChannelSvd
{
    std::vector<cmat> tx_directions;   // right singular vectors, n_tx x n_streams
    std::vector<cmat> rx_directions;   // left singular vectors, n_rx x n_streams
    std::vector<rvec> singular_values; // n_streams per subcarrier, descending
};

ChannelSvd channel_svd(const std::vector<cmat>& channels, int n_streams, Exec exec = Exec::serial);

/// All-digital precoder/combiner set. Precoders factor exactly as
/// directions[k] * diag(sqrt(powers_k)).
struct DigitalDesign
{
    std::vector<cmat> precoders;       // F[k], n_tx x n_streams
    std::vector<cmat> combiners;       // W[k], n_rx x n_streams
    std::vector<cmat> directions;      // tx singular bases
    std::vector<cmat> rx_directions;   // rx singular bases
    std::vector<rvec> singular_values;
    AllocationResult allocation;
};

/// Baseline: joint space-frequency waterfilling under the total budget
/// N_s * sum_j p_j. Ignores the per-antenna structure.
DigitalDesign design_tpc(const ChannelSvd& svd, const SystemConfig& cfg);

/// Relaxed per-antenna design: one power scalar per subcarrier shared by all
/// streams, total constrained by the smallest antenna budget.
DigitalDesign design_ppc_relaxed(const ChannelSvd& svd, const SystemConfig& cfg);

/// Upper-bound per-antenna design: per-(subcarrier, stream) powers allocated
/// over the polytope carved by every antenna budget.
DigitalDesign design_ppc_upper(const ChannelSvd& svd, const SystemConfig& cfg);

// Convenience overloads computing the SVDs internally.
DigitalDesign design_tpc(const std::vector<cmat>& channels, const SystemConfig& cfg,
                         Exec exec = Exec::serial);
DigitalDesign design_ppc_relaxed(const std::vector<cmat>& channels, const SystemConfig& cfg,
                                 Exec exec = Exec::serial);
DigitalDesign design_ppc_upper(const std::vector<cmat>& channels, const SystemConfig& cfg,
                               Exec exec = Exec::serial);

} // namespace papc

#endif

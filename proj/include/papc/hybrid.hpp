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

#ifndef PAPC_HYBRID_HPP
#define PAPC_HYBRID_HPP

#include "papc/digital.hpp"

#include <cstdint>
#include <vector>

namespace papc
{

/// Hybrid factorization: frequency-flat unit-modulus RF stages and
/// per-subcarrier baseband stages.
struct HybridDesign
{
    cmat f_rf;              // n_tx x l_tx, quantized phases
    std::vector<cmat> f_bb; // K of l_tx x n_streams
    cmat w_rf;              // n_rx x l_rx, quantized phases
    std::vector<cmat> w_bb; // K of l_rx x n_streams
    std::vector<cmat> v_g;  // baseband precoder directions, l_tx x n_streams
    std::vector<cmat> z_w;  // baseband combiner directions, l_rx x n_streams
    AllocationResult allocation;
    bool rf_combiner_degraded = false;          // quantization collapsed W_RF columns
    std::vector<std::uint8_t> deficient_subcarriers; // rank-deficient G[k] flags

    /// Composite filters F[k] = F_RF F_BB[k], W[k] = W_RF W_BB[k].
    std::vector<cmat> precoders() const;
    std::vector<cmat> combiners() const;
};

/// Rounds every entry to the nearest unit-modulus phase on the 2^q_bits
/// grid over [0, 2pi); ties go to the smaller grid index, zeros to phase 0.
cmat quantize_phases(const cmat& matrix, int q_bits);

/// True when `value` is bit-identical to a point of the quantized phase grid.
bool on_phase_grid(cd value, int q_bits);

/// T = sum_k F[k] F[k]*  (transmit-side subspace aggregate).
cmat precoder_gram(const std::vector<cmat>& precoders);

/// S = sum_k U[k] U[k]*  (receive-side subspace aggregate).
cmat combiner_gram(const std::vector<cmat>& rx_directions);

/// RF precoder: quantized phases of the top-L_t eigenvectors of T.
cmat rf_precoder(const DigitalDesign& all_digital, const SystemConfig& cfg);

/// RF combiner: quantized phases of the top-L_r eigenvectors of S.
cmat rf_combiner(const std::vector<cmat>& rx_directions, const SystemConfig& cfg);

struct BasebandDirections
{
    std::vector<cmat> v_g;  // l_tx x n_streams, orthonormal columns
    rmat weights;           // per-antenna weights |[F_RF v_g[k]]_jl|^2 / N_s
    std::vector<std::uint8_t> deficient; // G[k] rank below n_streams
};

/// Per-subcarrier baseband precoder directions from the reduced SVD of
/// G[k] = F[k]* F_RF, plus the polytope weights they induce.
BasebandDirections bb_precoder_directions(const DigitalDesign& all_digital, const cmat& f_rf,
                                          Exec exec = Exec::serial);

struct CombinerFactors
{
    std::vector<cmat> w_bb;
    std::vector<cmat> z_w;
    bool degraded = false;
};

/// Baseband combiners making W_RF W_BB[k] orthonormal while capturing the
/// receive subspaces; a rank-deficient quantized W_RF degrades via a
/// thresholded pseudo-inverse instead of failing.
CombinerFactors bb_combiner(const cmat& w_rf, const std::vector<cmat>& rx_directions,
                            Exec exec = Exec::serial);

/// Final power allocation over the effective channels
/// H_eff[k] = (W_RF W_BB[k])* H[k] F_RF v_g[k]; assembles the full design.
HybridDesign finalize_power(const std::vector<cmat>& channels, const SystemConfig& cfg,
                            const cmat& f_rf, const BasebandDirections& bb, const cmat& w_rf,
                            const CombinerFactors& comb);

/// Full pipeline from an all-digital design.
HybridDesign design_hybrid(const std::vector<cmat>& channels, const DigitalDesign& all_digital,
                           const SystemConfig& cfg, Exec exec = Exec::serial);

} // namespace papc

#endif

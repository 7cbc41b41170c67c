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

#include "papc/hybrid.hpp"

#include <cmath>
#include <stdexcept>

namespace papc
{

namespace
{

int grid_index(double phase, int q_bits)
{
    const int n_levels = 1 << q_bits;
    const double step = 2.0 * M_PI / n_levels;
    if (phase < 0.0) phase += 2.0 * M_PI;
    // Round half-down so a tie lands on the smaller index.
    int idx = static_cast<int>(std::ceil(phase / step - 0.5));
    if (idx >= n_levels) idx -= n_levels;
    if (idx < 0) idx = 0;
    return idx;
}

} // namespace

cmat quantize_phases(const cmat& matrix, int q_bits)
{
    if (q_bits < 1) throw std::invalid_argument("quantize_phases: q_bits must be >= 1");
    const double step = 2.0 * M_PI / (1 << q_bits);
    cmat out(matrix.rows(), matrix.cols());
    for (Eigen::Index c = 0; c < matrix.cols(); ++c)
        for (Eigen::Index r = 0; r < matrix.rows(); ++r)
        {
            const cd z = matrix(r, c);
            const int idx = (z == cd(0.0, 0.0)) ? 0 : grid_index(std::arg(z), q_bits);
            out(r, c) = std::polar(1.0, idx * step);
        }
    return out;
}

bool on_phase_grid(cd value, int q_bits)
{
    const double step = 2.0 * M_PI / (1 << q_bits);
    const int idx = grid_index(std::arg(value), q_bits);
    return value == std::polar(1.0, idx * step);
}

cmat precoder_gram(const std::vector<cmat>& precoders)
{
    cmat t = cmat::Zero(precoders[0].rows(), precoders[0].rows());
    for (const cmat& f : precoders) t.noalias() += f * f.adjoint();
    return t;
}

cmat combiner_gram(const std::vector<cmat>& rx_directions)
{
    cmat s = cmat::Zero(rx_directions[0].rows(), rx_directions[0].rows());
    for (const cmat& u : rx_directions) s.noalias() += u * u.adjoint();
    return s;
}

cmat rf_precoder(const DigitalDesign& all_digital, const SystemConfig& cfg)
{
    if (cfg.l_tx > cfg.n_tx)
        throw std::invalid_argument("rf_precoder: more RF chains than antennas");
    const TopEigen top = top_eigenvectors(precoder_gram(all_digital.precoders), cfg.l_tx);
    return quantize_phases(top.vectors, cfg.q_bits_tx);
}

cmat rf_combiner(const std::vector<cmat>& rx_directions, const SystemConfig& cfg)
{
    if (cfg.l_rx > cfg.n_rx)
        throw std::invalid_argument("rf_combiner: more RF chains than antennas");
    const TopEigen top = top_eigenvectors(combiner_gram(rx_directions), cfg.l_rx);
    return quantize_phases(top.vectors, cfg.q_bits_rx);
}

BasebandDirections bb_precoder_directions(const DigitalDesign& all_digital, const cmat& f_rf,
                                          Exec exec)
{
    const int k_total = static_cast<int>(all_digital.precoders.size());
    const int n_s = static_cast<int>(all_digital.precoders[0].cols());
    const int n_tx = static_cast<int>(f_rf.rows());

    BasebandDirections out;
    out.v_g.resize(k_total);
    out.deficient.assign(k_total, 0);
    out.weights.resize(n_tx, static_cast<Eigen::Index>(k_total) * n_s);

    parallel_for(exec, k_total, [&](int k) {
        const cmat g = all_digital.precoders[k].adjoint() * f_rf; // n_s x l_tx
        const TruncatedSvd svd = svd_truncate(g, n_s);
        // The thin right factor is orthonormal even when G[k] loses rank;
        // Jacobi fills the trailing columns with an orthonormal completion.
        out.v_g[k] = svd.v;
        if (svd.s(n_s - 1) <= 1e-12 * std::max(svd.s(0), 1e-300)) out.deficient[k] = 1;

        const cmat composite = f_rf * svd.v; // n_tx x n_s
        for (int l = 0; l < n_s; ++l)
            out.weights.col(k * n_s + l) = composite.col(l).cwiseAbs2() / n_s;
    });
    return out;
}

CombinerFactors bb_combiner(const cmat& w_rf, const std::vector<cmat>& rx_directions, Exec exec)
{
    const int k_total = static_cast<int>(rx_directions.size());
    const int l_rx = static_cast<int>(w_rf.cols());
    const int n_s = static_cast<int>(rx_directions[0].cols());

    const TruncatedSvd rf = svd_truncate(w_rf, l_rx);

    CombinerFactors out;
    rvec inv_sigma(l_rx);
    const double sigma_max = rf.s(0);
    for (int i = 0; i < l_rx; ++i)
    {
        if (rf.s(i) > 1e-10 * sigma_max)
        {
            inv_sigma(i) = 1.0 / rf.s(i);
        }
        else
        {
            inv_sigma(i) = 0.0; // coarse quantization collapsed this column
            out.degraded = true;
        }
    }
    // W_BB[k] = V_rf Sigma^+ Z_W[k] makes W_RF W_BB[k] = U_rf Z_W[k], which
    // has orthonormal columns whenever Sigma is invertible.
    const cmat left = rf.v * inv_sigma.asDiagonal();

    out.w_bb.resize(k_total);
    out.z_w.resize(k_total);
    parallel_for(exec, k_total, [&](int k) {
        const cmat y = w_rf.adjoint() * rx_directions[k]; // l_rx x n_s
        const TruncatedSvd ysvd = svd_truncate(y, n_s);
        out.z_w[k] = ysvd.u;
        out.w_bb[k] = left * ysvd.u;
    });
    return out;
}

HybridDesign finalize_power(const std::vector<cmat>& channels, const SystemConfig& cfg,
                            const cmat& f_rf, const BasebandDirections& bb, const cmat& w_rf,
                            const CombinerFactors& comb)
{
    const int k_total = static_cast<int>(channels.size());
    const int n_s = cfg.n_streams;

    std::vector<cmat> effective(k_total);
    for (int k = 0; k < k_total; ++k)
        effective[k] = (w_rf * comb.w_bb[k]).adjoint() * channels[k] * f_rf * bb.v_g[k];

    PolytopeSpec spec(bb.weights, cfg.budgets);
    AllocationResult alloc = solve_logdet_ppc(effective, spec);

    HybridDesign design;
    design.f_rf = f_rf;
    design.w_rf = w_rf;
    design.v_g = bb.v_g;
    design.z_w = comb.z_w;
    design.w_bb = comb.w_bb;
    design.rf_combiner_degraded = comb.degraded;
    design.deficient_subcarriers = bb.deficient;
    design.f_bb.resize(k_total);
    for (int k = 0; k < k_total; ++k)
    {
        const rvec amp = alloc.powers.segment(k * n_s, n_s).cwiseSqrt();
        design.f_bb[k] = bb.v_g[k] * amp.asDiagonal();
    }
    design.allocation = std::move(alloc);
    return design;
}

HybridDesign design_hybrid(const std::vector<cmat>& channels, const DigitalDesign& all_digital,
                           const SystemConfig& cfg, Exec exec)
{
    const cmat f_rf = rf_precoder(all_digital, cfg);
    const BasebandDirections bb = bb_precoder_directions(all_digital, f_rf, exec);
    const cmat w_rf = rf_combiner(all_digital.rx_directions, cfg);
    const CombinerFactors comb = bb_combiner(w_rf, all_digital.rx_directions, exec);
    return finalize_power(channels, cfg, f_rf, bb, w_rf, comb);
}

std::vector<cmat> HybridDesign::precoders() const
{
    std::vector<cmat> out(f_bb.size());
    for (size_t k = 0; k < f_bb.size(); ++k) out[k] = f_rf * f_bb[k];
    return out;
}

std::vector<cmat> HybridDesign::combiners() const
{
    std::vector<cmat> out(w_bb.size());
    for (size_t k = 0; k < w_bb.size(); ++k) out[k] = w_rf * w_bb[k];
    return out;
}

} // namespace papc

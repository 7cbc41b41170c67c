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

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace papc
{

double spectral_efficiency(const std::vector<cmat>& channels, const std::vector<cmat>& precoders,
                           const std::vector<cmat>& combiners, double snr_linear, int n_streams,
                           bool* degraded)
{
    const size_t k_total = channels.size();
    if (precoders.size() != k_total || combiners.size() != k_total)
        throw std::invalid_argument("spectral_efficiency: per-subcarrier set sizes differ");
    if (k_total == 0) return 0.0;
    if (degraded) *degraded = false;

    const double snr_over_ns = snr_linear / n_streams;
    double acc = 0.0;
    for (size_t k = 0; k < k_total; ++k)
    {
        const cmat& h = channels[k];
        const cmat& f = precoders[k];
        const cmat& w = combiners[k];
        if (!h.allFinite() || !f.allFinite() || !w.allFinite())
            throw std::invalid_argument("spectral_efficiency: non-finite input matrix");

        const cmat b = w.adjoint() * (h * f);     // n_w x n_f
        const cmat gram = w.adjoint() * w;        // whitening term

        Eigen::SelfAdjointEigenSolver<cmat> eig(gram);
        const rvec& ev = eig.eigenvalues();
        const double ev_max = ev.maxCoeff();
        cmat whitened;
        if (ev_max <= 0.0)
            continue; // zero combiner: no signal dimension survives
        if (ev.minCoeff() > 1e-12 * ev_max)
        {
            whitened = gram.llt().matrixL().solve(b);
        }
        else
        {
            // Thresholded pseudo-inverse congruence for rank-deficient W.
            if (degraded) *degraded = true;
            rvec inv_sqrt(ev.size());
            for (Eigen::Index i = 0; i < ev.size(); ++i)
                inv_sqrt(i) = ev(i) > 1e-12 * ev_max ? 1.0 / std::sqrt(ev(i)) : 0.0;
            whitened = inv_sqrt.asDiagonal() * (eig.eigenvectors().adjoint() * b);
        }

        cmat a = cmat::Identity(whitened.rows(), whitened.rows());
        a.noalias() += snr_over_ns * (whitened * whitened.adjoint());
        acc += log2det_hpd(a);
    }
    return acc / static_cast<double>(k_total);
}

rvec per_antenna_power(const std::vector<cmat>& precoders, int n_streams)
{
    if (precoders.empty()) return rvec();
    rvec power = rvec::Zero(precoders[0].rows());
    for (const cmat& f : precoders) power += f.rowwise().squaredNorm();
    return power / n_streams;
}

double chordal_distance(const cmat& a, const cmat& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("chordal_distance: dimension mismatch");
    const Eigen::Index d = a.cols();

    auto ensure_orthonormal = [d](const cmat& m) {
        const double defect =
            (m.adjoint() * m - cmat::Identity(d, d)).cwiseAbs().maxCoeff();
        return defect > 1e-8 ? orthonormal_columns(m) : m;
    };
    const cmat qa = ensure_orthonormal(a);
    const cmat qb = ensure_orthonormal(b);
    const double captured = (qa.adjoint() * qb).squaredNorm();
    return std::sqrt(std::max(0.0, static_cast<double>(d) - captured));
}

double subspace_quality(const std::vector<cmat>& channels, const cmat& u_rx, const cmat& u_tx,
                        int d)
{
    if (channels.empty()) throw std::invalid_argument("subspace_quality: no channels");
    if (d < 1 || d > u_rx.cols() || d > u_tx.cols())
        throw std::invalid_argument("subspace_quality: d exceeds the provided bases");
    if (u_rx.rows() != channels[0].rows() || u_tx.rows() != channels[0].cols())
        throw std::invalid_argument("subspace_quality: basis dimensions do not match the channel");

    const auto s = u_rx.leftCols(d);
    const auto t = u_tx.leftCols(d);
    double captured = 0.0, total = 0.0;
    for (const cmat& h : channels)
    {
        captured += (s.adjoint() * h * t).squaredNorm();
        total += h.squaredNorm();
    }
    if (total <= 0.0) throw std::invalid_argument("subspace_quality: zero channel");
    return captured / total;
}

rvec empirical_ccdf(const std::vector<double>& samples, const rvec& grid)
{
    if (samples.empty()) throw std::invalid_argument("empirical_ccdf: samples must be nonempty");
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    rvec out(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i)
    {
        const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), grid(i));
        out(i) = static_cast<double>(above) / static_cast<double>(sorted.size());
    }
    return out;
}

SubspaceBases channel_subspace_bases(const std::vector<cmat>& channels, int d)
{
    if (channels.empty()) throw std::invalid_argument("channel_subspace_bases: no channels");
    const Eigen::Index n_rx = channels[0].rows();
    const Eigen::Index n_tx = channels[0].cols();
    cmat rx_gram = cmat::Zero(n_rx, n_rx);
    cmat tx_gram = cmat::Zero(n_tx, n_tx);
    for (const cmat& h : channels)
    {
        rx_gram.noalias() += h * h.adjoint();
        tx_gram.noalias() += h.adjoint() * h;
    }
    SubspaceBases bases;
    bases.u_rx = top_eigenvectors(rx_gram, d).vectors;
    bases.u_tx = top_eigenvectors(tx_gram, d).vectors;
    return bases;
}

TrialMetrics evaluate_trial(const std::vector<cmat>& channels,
                            const std::vector<cmat>& precoders,
                            const std::vector<cmat>& combiners,
                            const std::vector<cmat>& tx_reference,
                            const std::vector<cmat>& rx_reference, double snr_linear,
                            int n_streams, int subspace_dim)
{
    const int k_total = static_cast<int>(channels.size());
    TrialMetrics metrics;
    metrics.rate_bits =
        spectral_efficiency(channels, precoders, combiners, snr_linear, n_streams);
    metrics.antenna_powers = per_antenna_power(precoders, n_streams);

    const SubspaceBases bases = channel_subspace_bases(channels, subspace_dim);
    metrics.gamma = subspace_quality(channels, bases.u_rx, bases.u_tx, subspace_dim);

    metrics.chordal_tx.resize(k_total);
    metrics.chordal_rx.resize(k_total);
    for (int k = 0; k < k_total; ++k)
    {
        metrics.chordal_tx(k) =
            chordal_distance(orthonormal_columns(precoders[k]), tx_reference[k]);
        metrics.chordal_rx(k) =
            chordal_distance(orthonormal_columns(combiners[k]), rx_reference[k]);
    }
    return metrics;
}

} // namespace papc

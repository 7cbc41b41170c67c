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

#ifndef PAPC_METRICS_HPP
#define PAPC_METRICS_HPP

#include "papc/linalg.hpp"

#include <vector>

namespace papc
{

/// Average spectral efficiency in bits/s/Hz:
/// (1/K) sum_k log2 |I + (SNR/N_s) (W*W)^{-1} W* H F F* H* W|,
/// evaluated through a Cholesky congruence of the whitening term. A
/// rank-deficient combiner falls back to a thresholded pseudo-inverse and
/// sets *degraded.
double spectral_efficiency(const std::vector<cmat>& channels, const std::vector<cmat>& precoders,
                           const std::vector<cmat>& combiners, double snr_linear, int n_streams,
                           bool* degraded = nullptr);

/// Average power delivered per transmit antenna:
/// entry j = (1/N_s) sum_k ||row j of F[k]||^2.
rvec per_antenna_power(const std::vector<cmat>& precoders, int n_streams);

/// Grassmannian chordal distance sqrt(d - ||A* B||_F^2) between the column
/// spaces of two n x d matrices. Inputs are orthonormalized when needed.
double chordal_distance(const cmat& a, const cmat& b);

/// Subspace quality gamma = sum_k ||U_s* H[k] U_t||_F^2 / sum_k ||H[k]||_F^2
/// using the leading d columns of each basis. In [0, 1]; 1 when the bases
/// capture the channel exactly.
double subspace_quality(const std::vector<cmat>& channels, const cmat& u_rx, const cmat& u_tx,
                        int d);

/// Empirical P(X > x) at each grid point.
rvec empirical_ccdf(const std::vector<double>& samples, const rvec& grid);

/// Aggregate channel bases: top-d eigenvectors of sum_k H[k] H[k]* (receive
/// side) and sum_k H[k]* H[k] (transmit side). Nested in d by construction.
struct SubspaceBases
{
    cmat u_rx;
    cmat u_tx;
};
SubspaceBases channel_subspace_bases(const std::vector<cmat>& channels, int d);

/// All per-trial evaluation metrics for one precoder/combiner set.
struct TrialMetrics
{
    double rate_bits = 0.0;
    rvec antenna_powers;
    double gamma = 0.0;     // channel subspace quality at the evaluation dim
    rvec chordal_tx;        // per subcarrier, vs the reference tx bases
    rvec chordal_rx;        // per subcarrier, vs the reference rx bases
};

/// Evaluates a design against the channel: whitened rate, delivered
/// per-antenna power, subspace quality at dimension d, and the chordal
/// distances between each filter's column space and the reference singular
/// bases.
TrialMetrics evaluate_trial(const std::vector<cmat>& channels,
                            const std::vector<cmat>& precoders,
                            const std::vector<cmat>& combiners,
                            const std::vector<cmat>& tx_reference,
                            const std::vector<cmat>& rx_reference, double snr_linear,
                            int n_streams, int subspace_dim);

} // namespace papc

#endif

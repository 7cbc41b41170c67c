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

#include "papc/digital.hpp"

#include <cmath>
#include <stdexcept>

namespace papc
{

namespace
{

constexpr double kLn2 = 0.6931471805599453;

/// Per-variable effective gains (SNR / N_s) * sigma_l^2[k].
rvec effective_gains(const ChannelSvd& svd, const SystemConfig& cfg)
{
    const int k_total = static_cast<int>(svd.singular_values.size());
    const double snr_over_ns = cfg.snr_linear() / cfg.n_streams;
    rvec gains(static_cast<Eigen::Index>(k_total) * cfg.n_streams);
    for (int k = 0; k < k_total; ++k)
        for (int l = 0; l < cfg.n_streams; ++l)
            gains(k * cfg.n_streams + l) =
                snr_over_ns * svd.singular_values[k](l) * svd.singular_values[k](l);
    return gains;
}

/// F[k] = directions[k] * diag(sqrt(powers_k)), W[k] = rx directions.
DigitalDesign assemble(const ChannelSvd& svd, const SystemConfig& cfg, AllocationResult alloc)
{
    const int k_total = static_cast<int>(svd.tx_directions.size());
    DigitalDesign d;
    d.directions = svd.tx_directions;
    d.rx_directions = svd.rx_directions;
    d.singular_values = svd.singular_values;
    d.precoders.resize(k_total);
    d.combiners.resize(k_total);
    for (int k = 0; k < k_total; ++k)
    {
        const rvec amp = alloc.powers.segment(k * cfg.n_streams, cfg.n_streams).cwiseSqrt();
        d.precoders[k] = svd.tx_directions[k] * amp.asDiagonal();
        d.combiners[k] = svd.rx_directions[k];
    }
    d.allocation = std::move(alloc);
    return d;
}

} // namespace

ChannelSvd channel_svd(const std::vector<cmat>& channels, int n_streams, Exec exec)
{
    const int k_total = static_cast<int>(channels.size());
    ChannelSvd out;
    out.tx_directions.resize(k_total);
    out.rx_directions.resize(k_total);
    out.singular_values.resize(k_total);
    parallel_for(exec, k_total, [&](int k) {
        TruncatedSvd svd = svd_truncate(channels[k], n_streams);
        out.rx_directions[k] = std::move(svd.u);
        out.tx_directions[k] = std::move(svd.v);
        out.singular_values[k] = std::move(svd.s);
    });
    return out;
}

DigitalDesign design_tpc(const ChannelSvd& svd, const SystemConfig& cfg)
{
    cfg.validate();
    const double total_budget = cfg.n_streams * cfg.budgets.sum();
    AllocationResult alloc = waterfill_total(effective_gains(svd, cfg), total_budget);
    return assemble(svd, cfg, std::move(alloc));
}

DigitalDesign design_ppc_relaxed(const ChannelSvd& svd, const SystemConfig& cfg)
{
    cfg.validate();
    const int k_total = static_cast<int>(svd.singular_values.size());
    const int n_s = cfg.n_streams;
    const rvec gains = effective_gains(svd, cfg);
    const double budget = n_s * cfg.budgets.minCoeff(); // sum_k rho^2[k] <= N_s p_0

    AllocationResult alloc;
    alloc.powers = rvec::Zero(gains.size());
    alloc.multipliers = rvec::Zero(1);
    alloc.feasible = true;

    // All streams of a subcarrier share one rho^2[k]; the subcarrier's
    // marginal utility sum_l c_l / (ln2 (1 + c_l rho^2)) is monotone, so the
    // common water level is found by nested bisection.
    auto marginal = [&](int k, double rho2) {
        double s = 0.0;
        for (int l = 0; l < n_s; ++l)
        {
            const double c = gains(k * n_s + l);
            s += c / (kLn2 * (1.0 + c * rho2));
        }
        return s;
    };
    auto rho2_at = [&](int k, double nu) {
        if (marginal(k, 0.0) <= nu) return 0.0;
        double hi = 1.0;
        int grow = 0;
        while (marginal(k, hi) > nu && grow++ < 200) hi *= 2.0;
        double lo = 0.0;
        for (int it = 0; it < 80; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            if (marginal(k, mid) > nu)
                lo = mid;
            else
                hi = mid;
        }
        return hi;
    };

    double nu_hi = 0.0;
    for (int k = 0; k < k_total; ++k) nu_hi = std::max(nu_hi, marginal(k, 0.0));
    if (nu_hi <= 0.0 || budget <= 0.0) return assemble(svd, cfg, std::move(alloc));

    double nu_lo = nu_hi;
    auto total_at = [&](double nu) {
        double s = 0.0;
        for (int k = 0; k < k_total; ++k) s += rho2_at(k, nu);
        return s;
    };
    int grow = 0;
    while (total_at(nu_lo) < budget && grow++ < 200) nu_lo *= 0.5;

    int iters = 0;
    for (; iters < 100; ++iters)
    {
        const double nu = 0.5 * (nu_lo + nu_hi);
        if (total_at(nu) > budget)
            nu_lo = nu;
        else
            nu_hi = nu;
    }
    const double nu = 0.5 * (nu_lo + nu_hi);

    rvec rho2(k_total);
    for (int k = 0; k < k_total; ++k) rho2(k) = rho2_at(k, nu);
    const double total = rho2.sum();
    if (total > 0.0) rho2 *= budget / total;

    for (int k = 0; k < k_total; ++k)
        for (int l = 0; l < n_s; ++l)
        {
            alloc.powers(k * n_s + l) = rho2(k);
            alloc.objective_bits += std::log2(1.0 + gains(k * n_s + l) * rho2(k));
        }
    alloc.multipliers(0) = nu;
    alloc.kkt_residual = std::abs(rho2.sum() - budget) / budget;
    alloc.iterations = iters;
    alloc.converged = true;
    return assemble(svd, cfg, std::move(alloc));
}

DigitalDesign design_ppc_upper(const ChannelSvd& svd, const SystemConfig& cfg)
{
    cfg.validate();
    const int k_total = static_cast<int>(svd.tx_directions.size());
    const int n_s = cfg.n_streams;

    rmat weights(cfg.n_tx, static_cast<Eigen::Index>(k_total) * n_s);
    for (int k = 0; k < k_total; ++k)
        for (int l = 0; l < n_s; ++l)
            weights.col(k * n_s + l) = svd.tx_directions[k].col(l).cwiseAbs2() / cfg.n_streams;

    PolytopeSpec spec(std::move(weights), cfg.budgets);
    AllocationResult alloc = solve_separable_ppc(effective_gains(svd, cfg), spec);
    return assemble(svd, cfg, std::move(alloc));
}

DigitalDesign design_tpc(const std::vector<cmat>& channels, const SystemConfig& cfg, Exec exec)
{
    return design_tpc(channel_svd(channels, cfg.n_streams, exec), cfg);
}

DigitalDesign design_ppc_relaxed(const std::vector<cmat>& channels, const SystemConfig& cfg, Exec exec)
{
    return design_ppc_relaxed(channel_svd(channels, cfg.n_streams, exec), cfg);
}

DigitalDesign design_ppc_upper(const std::vector<cmat>& channels, const SystemConfig& cfg, Exec exec)
{
    return design_ppc_upper(channel_svd(channels, cfg.n_streams, exec), cfg);
}

} // namespace papc

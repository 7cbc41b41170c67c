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

#include "papc/solver.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace papc
{

namespace
{

constexpr double kLn2 = 0.6931471805599453;
constexpr double kKktTol = 1e-6;

double safe_rel(double value, double reference)
{
    return value / std::max(std::abs(reference), 1.0);
}

} // namespace

PolytopeSpec::PolytopeSpec(rmat weights, rvec budgets)
    : weights_(std::move(weights)), budgets_(std::move(budgets))
{
    if (weights_.rows() != budgets_.size())
        throw std::invalid_argument("PolytopeSpec: one budget per weight row required");
    if ((weights_.array() < 0.0).any())
        throw std::invalid_argument("PolytopeSpec: weights must be nonnegative");
    if ((budgets_.array() < 0.0).any())
        throw std::invalid_argument("PolytopeSpec: budgets must be nonnegative");
    for (int m = 0; m < weights_.cols(); ++m)
        if (weights_.col(m).maxCoeff() <= 0.0)
            throw std::invalid_argument("PolytopeSpec: column " + std::to_string(m) +
                                        " has no positive weight (variable unbounded)");
}

AllocationResult waterfill_total(const rvec& gains, double budget)
{
    const int n = static_cast<int>(gains.size());
    AllocationResult res;
    res.powers = rvec::Zero(n);
    res.multipliers = rvec::Zero(1);
    res.feasible = true;

    const bool any_gain = (gains.array() > 0.0).any();
    if (!any_gain || budget <= 0.0) return res;

    double mu_lo = std::numeric_limits<double>::infinity();
    double mu_hi = 0.0;
    for (int i = 0; i < n; ++i)
    {
        if (gains(i) <= 0.0) continue;
        mu_lo = std::min(mu_lo, 1.0 / gains(i));
        mu_hi = std::max(mu_hi, 1.0 / gains(i));
    }
    mu_hi += budget;

    auto total_at = [&](double mu) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i)
            if (gains(i) > 0.0) sum += std::max(0.0, mu - 1.0 / gains(i));
        return sum;
    };

    int iters = 0;
    for (; iters < 200; ++iters)
    {
        const double mu = 0.5 * (mu_lo + mu_hi);
        if (total_at(mu) > budget)
            mu_hi = mu;
        else
            mu_lo = mu;
        if (mu_hi - mu_lo <= 1e-16 * std::max(1.0, mu_hi)) break;
    }
    const double mu = 0.5 * (mu_lo + mu_hi);
    for (int i = 0; i < n; ++i)
        if (gains(i) > 0.0) res.powers(i) = std::max(0.0, mu - 1.0 / gains(i));

    // Land on the budget exactly; bisection leaves a residual below 1e-10.
    const double sum = res.powers.sum();
    if (sum > 0.0) res.powers *= budget / sum;

    res.multipliers(0) = 1.0 / (mu * kLn2);
    double level_dev = 0.0;
    for (int i = 0; i < n; ++i)
    {
        if (res.powers(i) <= 0.0) continue;
        res.objective_bits += std::log2(1.0 + gains(i) * res.powers(i));
        level_dev = std::max(level_dev, std::abs(res.powers(i) + 1.0 / gains(i) - mu) / mu);
    }
    res.kkt_residual = std::max(level_dev, std::abs(res.powers.sum() - budget) / budget);
    res.iterations = iters;
    res.converged = res.kkt_residual < kKktTol;
    return res;
}

namespace
{

/// Shared bookkeeping for the two polytope solvers: variables forced to zero
/// because a zero-budget row covers them (or because they cannot improve the
/// objective).
std::vector<bool> pinned_by_zero_budget(const PolytopeSpec& spec)
{
    std::vector<bool> pinned(spec.n_cols(), false);
    for (int j = 0; j < spec.n_rows(); ++j)
    {
        if (spec.budgets()(j) > 0.0) continue;
        for (int m = 0; m < spec.n_cols(); ++m)
            if (spec.weights()(j, m) > 0.0) pinned[m] = true;
    }
    return pinned;
}

} // namespace

AllocationResult solve_separable_ppc(const rvec& gains, const PolytopeSpec& spec)
{
    const int n_vars = spec.n_cols();
    const int n_rows = spec.n_rows();
    if (gains.size() != n_vars)
        throw std::invalid_argument("solve_separable_ppc: gains length must match weight columns");

    const rmat& w = spec.weights();
    const rvec& p = spec.budgets();

    AllocationResult res;
    res.powers = rvec::Zero(n_vars);
    res.multipliers = rvec::Zero(n_rows);
    res.feasible = true;

    std::vector<bool> pinned = pinned_by_zero_budget(spec);
    bool any_free = false;
    for (int m = 0; m < n_vars; ++m)
    {
        if (gains(m) <= 0.0) pinned[m] = true;
        any_free = any_free || !pinned[m];
    }
    if (!any_free) return res;

    // x_m(sigma) with sigma = (W^T lambda)_m is the generalized waterfilling
    // step; the dual is then minimized one multiplier at a time, each
    // coordinate solved exactly by bisection on its (monotone) row usage.
    auto x_of_sigma = [&](int m, double sigma) {
        if (pinned[m]) return 0.0;
        if (sigma <= 0.0) return std::numeric_limits<double>::infinity();
        return std::max(0.0, 1.0 / (kLn2 * sigma) - 1.0 / gains(m));
    };

    rvec lambda = rvec::Zero(n_rows);
    for (int j = 0; j < n_rows; ++j)
        if (p(j) > 0.0) lambda(j) = 1.0;

    rvec sigma = w.transpose() * lambda;

    std::vector<std::vector<int>> covered(n_rows);
    for (int j = 0; j < n_rows; ++j)
        for (int m = 0; m < n_vars; ++m)
            if (w(j, m) > 0.0 && !pinned[m]) covered[j].push_back(m);

    const int max_sweeps = 10000;
    int sweep = 0;
    double kkt = std::numeric_limits<double>::infinity();
    double best_kkt = kkt;
    int stalled = 0;
    rvec base(n_vars);
    for (; sweep < max_sweeps; ++sweep)
    {
        for (int j = 0; j < n_rows; ++j)
        {
            if (p(j) <= 0.0 || covered[j].empty()) continue;
            base = sigma - lambda(j) * w.row(j).transpose();

            auto usage_at = [&](double lj) {
                double usage = 0.0;
                for (int m : covered[j])
                {
                    const double x = x_of_sigma(m, base(m) + lj * w(j, m));
                    if (std::isinf(x)) return std::numeric_limits<double>::infinity();
                    usage += w(j, m) * x;
                }
                return usage;
            };

            double new_lambda;
            if (usage_at(0.0) <= p(j))
            {
                new_lambda = 0.0;
            }
            else
            {
                double hi = std::max(1.0, 2.0 * lambda(j));
                int grow = 0;
                while (usage_at(hi) > p(j) && grow++ < 200) hi *= 2.0;
                double lo = 0.0;
                for (int it = 0; it < 80; ++it)
                {
                    const double mid = 0.5 * (lo + hi);
                    if (usage_at(mid) > p(j))
                        lo = mid;
                    else
                        hi = mid;
                }
                new_lambda = hi;
            }
            sigma = base + new_lambda * w.row(j).transpose();
            lambda(j) = new_lambda;
        }

        // Convergence check on the full KKT system.
        rvec x(n_vars);
        for (int m = 0; m < n_vars; ++m) x(m) = x_of_sigma(m, sigma(m));
        const rvec usage = w * x;
        double comp = 0.0, viol = 0.0;
        for (int j = 0; j < n_rows; ++j)
        {
            if (p(j) <= 0.0) continue;
            comp = std::max(comp, lambda(j) * std::abs(p(j) - usage(j)) / std::max(p(j), 1e-300));
            viol = std::max(viol, safe_rel(std::max(0.0, usage(j) - p(j)), p(j)));
        }
        kkt = std::max(comp, viol);
        if (kkt < 0.1 * kKktTol) break;
        if (kkt < 0.99 * best_kkt)
        {
            best_kkt = kkt;
            stalled = 0;
        }
        else if (++stalled >= 30)
        {
            break; // hand over to the Newton polish below
        }
    }

    // Projected-Newton polish on the dual. Coordinate sweeps zigzag when
    // constraint rows are nearly parallel; the dual function
    //   q(lambda) = sum_m phi_m(sigma_m) + lambda^T p
    // is smooth and convex with gradient p - W x(lambda), so a damped Newton
    // descent with projection onto lambda >= 0 finishes reliably.
    auto dual_value = [&](const rvec& sig, const rvec& lam) {
        double q = lam.dot(p);
        for (int m = 0; m < n_vars; ++m)
        {
            if (pinned[m]) continue;
            const double s = sig(m);
            if (s <= 0.0) return std::numeric_limits<double>::infinity();
            if (s < gains(m) / kLn2)
                q += std::log2(gains(m) / (kLn2 * s)) - 1.0 / kLn2 + s / gains(m);
        }
        return q;
    };

    auto kkt_of = [&](const rvec& lam, const rvec& sig) {
        rvec xx(n_vars);
        for (int m = 0; m < n_vars; ++m) xx(m) = x_of_sigma(m, sig(m));
        const rvec use = w * xx;
        double measure = 0.0;
        for (int j = 0; j < n_rows; ++j)
        {
            if (p(j) <= 0.0) continue;
            measure = std::max(measure,
                               lam(j) * std::abs(p(j) - use(j)) / std::max(p(j), 1e-300));
            measure = std::max(measure, safe_rel(std::max(0.0, use(j) - p(j)), p(j)));
        }
        return measure;
    };

    int polish_iters = 0;
    double q_now = dual_value(sigma, lambda);
    for (; polish_iters < 200 && kkt >= 0.1 * kKktTol; ++polish_iters)
    {
        rvec x_now(n_vars);
        bool finite = true;
        for (int m = 0; m < n_vars; ++m)
        {
            x_now(m) = x_of_sigma(m, sigma(m));
            finite = finite && !std::isinf(x_now(m));
        }
        if (!finite) break;
        const rvec usage_now = w * x_now;
        const rvec grad = p - usage_now; // gradient of q

        std::vector<int> free;
        for (int j = 0; j < n_rows; ++j)
            if (p(j) > 0.0 && (lambda(j) > 0.0 || grad(j) < 0.0)) free.push_back(j);
        if (free.empty()) break;
        const int nf = static_cast<int>(free.size());

        rmat jac = rmat::Zero(nf, nf);
        for (int m = 0; m < n_vars; ++m)
        {
            if (pinned[m] || x_now(m) <= 0.0) continue;
            const double curvature = 1.0 / (kLn2 * sigma(m) * sigma(m));
            for (int a = 0; a < nf; ++a)
            {
                const double wa = w(free[a], m);
                if (wa <= 0.0) continue;
                for (int b = a; b < nf; ++b) jac(a, b) += wa * w(free[b], m) * curvature;
            }
        }
        for (int a = 0; a < nf; ++a)
            for (int b = 0; b < a; ++b) jac(a, b) = jac(b, a);
        jac.diagonal().array() += 1e-12 * std::max(1.0, jac.diagonal().maxCoeff());

        rvec grad_free(nf);
        for (int a = 0; a < nf; ++a) grad_free(a) = grad(free[a]);
        rvec delta = -Eigen::LLT<rmat>(jac).solve(grad_free);
        if (delta.dot(grad_free) >= 0.0) delta = -grad_free;

        bool improved = false;
        double alpha = 1.0;
        for (int bt = 0; bt < 40 && !improved; ++bt)
        {
            rvec lam_c = lambda;
            for (int a = 0; a < nf; ++a)
                lam_c(free[a]) = std::max(0.0, lambda(free[a]) + alpha * delta(a));
            const rvec sig_c = w.transpose() * lam_c;
            const double q_c = dual_value(sig_c, lam_c);
            double expected = 0.0;
            for (int j = 0; j < n_rows; ++j) expected += grad(j) * (lam_c(j) - lambda(j));
            if (q_c <= q_now + 1e-4 * expected && expected < 0.0)
            {
                lambda = lam_c;
                sigma = sig_c;
                q_now = q_c;
                improved = true;
            }
            alpha *= 0.5;
        }
        if (!improved) break;
        kkt = kkt_of(lambda, sigma);
    }

    rvec x(n_vars);
    for (int m = 0; m < n_vars; ++m) x(m) = x_of_sigma(m, sigma(m));

    // Primal feasibility polish: scale down if bisection left a violation.
    double worst = 1.0;
    const rvec usage = w * x;
    for (int j = 0; j < n_rows; ++j)
        if (p(j) > 0.0 && usage(j) > p(j)) worst = std::max(worst, usage(j) / p(j));
    if (worst > 1.0) x /= worst;

    res.powers = x;
    res.multipliers = lambda;
    res.iterations = std::min(sweep + 1, max_sweeps);

    double stat = 0.0;
    for (int m = 0; m < n_vars; ++m)
    {
        if (pinned[m]) continue;
        const double grad = gains(m) / (kLn2 * (1.0 + gains(m) * x(m)));
        stat = std::max(stat, x(m) > 0.0 ? std::abs(grad - sigma(m))
                                         : std::max(0.0, grad - sigma(m)));
        res.objective_bits += std::log2(1.0 + gains(m) * x(m));
    }
    res.kkt_residual = std::max(stat, kkt);
    res.converged = res.kkt_residual < kKktTol;
    return res;
}

double logdet_rate_objective(const std::vector<cmat>& effective, const rvec& x)
{
    const int k_total = static_cast<int>(effective.size());
    if (k_total == 0) return 0.0;
    const int n_s = static_cast<int>(effective[0].cols());
    if (x.size() != static_cast<Eigen::Index>(k_total) * n_s)
        throw std::invalid_argument("logdet_rate_objective: allocation length mismatch");

    double acc = 0.0;
    for (int k = 0; k < k_total; ++k)
    {
        const cmat& h = effective[k];
        cmat a = cmat::Identity(h.rows(), h.rows());
        a.noalias() += h * x.segment(k * n_s, n_s).asDiagonal() * h.adjoint();
        acc += log2det_hpd(a);
    }
    return acc / k_total;
}

rvec logdet_rate_gradient(const std::vector<cmat>& effective, const rvec& x)
{
    const int k_total = static_cast<int>(effective.size());
    const int n_s = k_total > 0 ? static_cast<int>(effective[0].cols()) : 0;
    if (x.size() != static_cast<Eigen::Index>(k_total) * n_s)
        throw std::invalid_argument("logdet_rate_gradient: allocation length mismatch");

    rvec grad(x.size());
    for (int k = 0; k < k_total; ++k)
    {
        const cmat& h = effective[k];
        cmat a = cmat::Identity(h.rows(), h.rows());
        a.noalias() += h * x.segment(k * n_s, n_s).asDiagonal() * h.adjoint();
        const cmat solved = Eigen::LLT<cmat>(a).solve(h);
        for (int l = 0; l < n_s; ++l)
            grad(k * n_s + l) = std::real(h.col(l).dot(solved.col(l))) / (k_total * kLn2);
    }
    return grad;
}

AllocationResult solve_logdet_ppc(const std::vector<cmat>& effective, const PolytopeSpec& spec)
{
    const int k_total = static_cast<int>(effective.size());
    if (k_total == 0) throw std::invalid_argument("solve_logdet_ppc: no effective channels");
    const int n_s = static_cast<int>(effective[0].cols());
    const int n_vars = spec.n_cols();
    const int n_rows = spec.n_rows();
    if (n_vars != k_total * n_s)
        throw std::invalid_argument("solve_logdet_ppc: spec columns must equal K * N_s");

    const rmat& w = spec.weights();
    const rvec& p = spec.budgets();

    AllocationResult res;
    res.powers = rvec::Zero(n_vars);
    res.multipliers = rvec::Zero(n_rows);
    res.feasible = true;

    std::vector<bool> pinned = pinned_by_zero_budget(spec);
    for (int m = 0; m < n_vars; ++m)
        if (effective[m / n_s].col(m % n_s).norm() == 0.0) pinned[m] = true;

    std::vector<int> free_vars;
    for (int m = 0; m < n_vars; ++m)
        if (!pinned[m]) free_vars.push_back(m);
    if (free_vars.empty())
    {
        res.objective_bits = logdet_rate_objective(effective, res.powers);
        return res;
    }

    std::vector<int> active_rows;
    for (int j = 0; j < n_rows; ++j)
        if (p(j) > 0.0) active_rows.push_back(j);

    // Strictly interior start: every active row begins at half its budget.
    rvec x = rvec::Zero(n_vars);
    for (int m : free_vars)
    {
        double cap = std::numeric_limits<double>::infinity();
        for (int j : active_rows)
            if (w(j, m) > 0.0) cap = std::min(cap, p(j) / (2.0 * free_vars.size() * w(j, m)));
        x(m) = cap;
    }

    auto barrier_value = [&](const rvec& xv, double t, bool& ok) {
        ok = true;
        for (int m : free_vars)
            if (xv(m) <= 0.0)
            {
                ok = false;
                return 0.0;
            }
        double val = t * logdet_rate_objective(effective, xv);
        const rvec usage = w * xv;
        for (int j : active_rows)
        {
            const double slack = p(j) - usage(j);
            if (slack <= 0.0)
            {
                ok = false;
                return 0.0;
            }
            val += std::log(slack);
        }
        for (int m : free_vars) val += std::log(xv(m));
        return val;
    };

    auto barrier_gradient = [&](const rvec& xv, double t) {
        rvec grad = t * logdet_rate_gradient(effective, xv);
        const rvec usage = w * xv;
        for (int j : active_rows)
        {
            const double slack = p(j) - usage(j);
            grad -= w.row(j).transpose() / slack;
        }
        for (int m = 0; m < n_vars; ++m)
        {
            if (pinned[m])
                grad(m) = 0.0;
            else
                grad(m) += 1.0 / xv(m);
        }
        return grad;
    };

    const int n_free = static_cast<int>(free_vars.size());
    const int n_active = static_cast<int>(active_rows.size());
    rmat w_free(n_active, n_free);
    for (int j = 0; j < n_active; ++j)
        for (int i = 0; i < n_free; ++i) w_free(j, i) = w(active_rows[j], free_vars[i]);

    // Per-subcarrier layout of the free variables, for the block Hessian.
    std::vector<std::vector<int>> block_streams(k_total); // stream index within subcarrier
    std::vector<std::vector<int>> block_free(k_total);    // position in free_vars
    for (int i = 0; i < n_free; ++i)
    {
        const int m = free_vars[i];
        block_streams[m / n_s].push_back(m % n_s);
        block_free[m / n_s].push_back(i);
    }

    // Newton step on the barrier. The negated Hessian splits as
    //   B + W^T diag(1/s^2) W
    // with B block-diagonal over subcarriers (log-det curvature plus the
    // 1/x^2 barrier diagonal), so the solve goes through Woodbury with one
    // small dense factorization on the antenna side.
    std::vector<Eigen::LLT<rmat>> block_llt(k_total);
    auto solve_blocks = [&](const rvec& rhs) {
        rvec out(n_free);
        for (int k = 0; k < k_total; ++k)
        {
            const int nb = static_cast<int>(block_streams[k].size());
            if (nb == 0) continue;
            rvec local(nb);
            for (int r = 0; r < nb; ++r) local(r) = rhs(block_free[k][r]);
            local = block_llt[k].solve(local);
            for (int r = 0; r < nb; ++r) out(block_free[k][r]) = local(r);
        }
        return out;
    };

    auto newton_direction = [&](const rvec& xv, double t, const rvec& grad) -> rvec {
        for (int k = 0; k < k_total; ++k)
        {
            const int nb = static_cast<int>(block_streams[k].size());
            if (nb == 0) continue;
            const cmat& h = effective[k];
            cmat a = cmat::Identity(h.rows(), h.rows());
            a.noalias() += h * xv.segment(k * n_s, n_s).asDiagonal() * h.adjoint();
            const cmat j_full = h.adjoint() * Eigen::LLT<cmat>(a).solve(h);
            rmat block(nb, nb);
            for (int r = 0; r < nb; ++r)
                for (int c = 0; c < nb; ++c)
                    block(r, c) = t *
                                  std::norm(j_full(block_streams[k][r], block_streams[k][c])) /
                                  (k_total * kLn2);
            for (int r = 0; r < nb; ++r)
            {
                const double xm = xv(free_vars[block_free[k][r]]);
                block(r, r) += 1.0 / (xm * xm);
            }
            block_llt[k].compute(block);
        }

        rvec grad_free(n_free);
        for (int i = 0; i < n_free; ++i) grad_free(i) = grad(free_vars[i]);

        rvec direction_free;
        if (n_active == 0)
        {
            direction_free = solve_blocks(grad_free);
        }
        else
        {
            const rvec usage = w * xv;
            rvec slack_sq(n_active);
            for (int j = 0; j < n_active; ++j)
            {
                const double slack = p(active_rows[j]) - usage(active_rows[j]);
                slack_sq(j) = slack * slack;
            }
            rmat y(n_free, n_active);
            for (int j = 0; j < n_active; ++j) y.col(j) = solve_blocks(w_free.row(j).transpose());
            rmat small = w_free * y;
            small.diagonal() += slack_sq;
            const rvec bg = solve_blocks(grad_free);
            const rvec correction = Eigen::LLT<rmat>(small).solve(w_free * bg);
            direction_free = bg - y * correction;
        }

        rvec direction = rvec::Zero(n_vars);
        for (int i = 0; i < n_free; ++i) direction(free_vars[i]) = direction_free(i);
        return direction;
    };

    // Barrier schedule: x10 per stage, t = 1 .. 1e10. The final weight keeps
    // the centering offset 1/(t x) of interior variables well below the 1e-6
    // KKT tolerance for desk-scale allocations.
    const int max_inner = 200;
    const int n_stages = 11;
    int total_iters = 0;
    double t = 1.0;
    double final_grad_norm = 0.0;
    for (int stage = 0; stage < n_stages; ++stage, t *= 10.0)
    {
        // The last stage is polished down to the gradient tolerance itself:
        // the scaled gradient norm is exactly the barrier KKT certificate.
        // Earlier stages may leave on a small Newton decrement instead.
        const bool final_stage = stage == n_stages - 1;
        const double grad_tol = (final_stage ? 1e-8 : 1e-10) * t;
        const int quad_cap = final_stage ? 64 : 8;
        bool ok = false;
        double value = barrier_value(x, t, ok);
        int quad_steps = 0;
        int it = 0;
        for (; it < max_inner; ++it)
        {
            const rvec grad = barrier_gradient(x, t);
            final_grad_norm = grad.cwiseAbs().maxCoeff();
            if (final_grad_norm <= grad_tol) break;

            const rvec direction = newton_direction(x, t, grad);
            double slope = grad.dot(direction);
            const rvec* dir = &direction;
            bool newton_step = true;
            if (!(slope > 0.0))
            {
                dir = &grad; // fall back to steepest ascent
                slope = grad.squaredNorm();
                newton_step = false;
            }
            // Half the Newton decrement bounds the remaining inner gap.
            if (!final_stage && newton_step && slope <= 1e-13 * t) break;

            bool accepted = false;
            const double value_floor = 1e3 * 2.2e-16 * std::max(1.0, std::abs(value));
            if (newton_step && 0.5 * slope <= value_floor && quad_steps < quad_cap)
            {
                // The expected gain is below the floating-point resolution
                // of the barrier value, so Armijo cannot see it. Take Newton
                // steps guarded by gradient-norm descent instead.
                double step = 1.0;
                for (int bt = 0; bt < 60 && !accepted; ++bt)
                {
                    rvec cand = x + step * (*dir);
                    for (int m = 0; m < n_vars; ++m)
                        if (pinned[m]) cand(m) = 0.0;
                    bool cand_ok = false;
                    barrier_value(cand, t, cand_ok);
                    if (cand_ok &&
                        barrier_gradient(cand, t).cwiseAbs().maxCoeff() <= final_grad_norm)
                    {
                        x = cand;
                        accepted = true;
                        ++quad_steps;
                    }
                    step *= 0.5;
                }
                value = barrier_value(x, t, ok);
            }
            else
            {
                // Damped step: backtrack until inside the domain and improving.
                double step = 1.0;
                for (int bt = 0; bt < 80 && !accepted; ++bt)
                {
                    rvec cand = x + step * (*dir);
                    for (int m = 0; m < n_vars; ++m)
                        if (pinned[m]) cand(m) = 0.0;
                    bool cand_ok = false;
                    const double cand_value = barrier_value(cand, t, cand_ok);
                    if (cand_ok && cand_value >= value + 1e-4 * step * slope)
                    {
                        x = cand;
                        value = cand_value;
                        accepted = true;
                    }
                    step *= 0.5;
                }
            }
            if (!accepted) break; // progress below the floating-point floor
        }
        total_iters += it;
    }
    const double t_final = t / 10.0;

    res.powers = x;
    res.objective_bits = logdet_rate_objective(effective, x);
    res.iterations = total_iters;

    // KKT report with least-squares dual estimates: the raw barrier
    // multipliers 1/(t s_j) overstate the residual once the iterate sits a
    // hair off the central path.
    const rvec grad_f = logdet_rate_gradient(effective, x);
    const rvec usage = w * x;
    const double x_max = x.maxCoeff();

    std::vector<int> binding;
    for (int j : active_rows)
        if (p(j) - usage(j) <= 1e-4 * std::max(p(j), 1e-300)) binding.push_back(j);

    std::vector<int> interior;
    for (int m : free_vars)
        if (x(m) > 1e-9 * x_max) interior.push_back(m);

    auto certificate = [&](const rvec& lambda) {
        const rvec sigma = w.transpose() * lambda;
        double stat = 0.0;
        for (int m : free_vars)
        {
            if (x(m) > 1e-9 * x_max)
                stat = std::max(stat, std::abs(grad_f(m) + 1.0 / (t_final * x(m)) - sigma(m)));
            else
                stat = std::max(stat, std::max(0.0, grad_f(m) - sigma(m)));
        }
        double comp = 0.0;
        for (int j : active_rows)
            comp = std::max(comp, lambda(j) * (p(j) - usage(j)) / std::max(p(j), 1e-300));
        return std::max(stat, comp);
    };

    // Candidate duals: the on-path barrier estimate, and a rank-revealing
    // least-squares fit over the binding rows (better when the iterate sits
    // slightly off the central path).
    rvec lambda_barrier = rvec::Zero(n_rows);
    for (int j : active_rows) lambda_barrier(j) = 1.0 / (t_final * (p(j) - usage(j)));
    double best = certificate(lambda_barrier);
    rvec lambda = lambda_barrier;

    if (!binding.empty() && !interior.empty())
    {
        rmat a_t(static_cast<int>(interior.size()), static_cast<int>(binding.size()));
        rvec b(static_cast<int>(interior.size()));
        for (size_t i = 0; i < interior.size(); ++i)
        {
            const int m = interior[i];
            b(i) = grad_f(m) + 1.0 / (t_final * x(m));
            for (size_t j = 0; j < binding.size(); ++j) a_t(i, j) = w(binding[j], m);
        }
        const rvec fitted = a_t.colPivHouseholderQr().solve(b);
        rvec lambda_ls = rvec::Zero(n_rows);
        for (size_t j = 0; j < binding.size(); ++j)
            lambda_ls(binding[j]) = std::max(0.0, fitted(j));
        const double ls_score = certificate(lambda_ls);
        if (ls_score < best)
        {
            best = ls_score;
            lambda = lambda_ls;
        }
    }
    res.multipliers = lambda;
    res.kkt_residual = best;
    res.converged = res.kkt_residual < kKktTol;
    return res;
}

} // namespace papc

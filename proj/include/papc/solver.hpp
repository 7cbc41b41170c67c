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

#ifndef PAPC_SOLVER_HPP
#define PAPC_SOLVER_HPP

#include "papc/linalg.hpp"

#include <vector>

namespace papc
{

/// Power allocation with solver diagnostics. `powers` holds one entry per
/// (subcarrier, stream) variable, grouped per subcarrier with the stream
/// index fastest.
struct AllocationResult
{
    rvec powers;
    double objective_bits = 0.0;
    rvec multipliers;        // dual variables, one per constraint row
    double kkt_residual = 0.0;
    int iterations = 0;
    bool feasible = false;
    bool converged = true;   // false flags a convergence warning, never fatal
};

/// Linear power polytope { x >= 0 : weights * x <= budgets }. Row j couples
/// all variables through transmit antenna j; entry (j, m) carries the
/// |u_jl[k]|^2 / N_s factor of the per-antenna constraint.
class PolytopeSpec
{
  public:
    PolytopeSpec(rmat weights, rvec budgets);

    const rmat& weights() const { return weights_; }
    const rvec& budgets() const { return budgets_; }
    int n_rows() const { return static_cast<int>(weights_.rows()); }
    int n_cols() const { return static_cast<int>(weights_.cols()); }

  private:
    rmat weights_;
    rvec budgets_;
};

/// Classical waterfilling: maximize sum log2(1 + g_i x_i) subject to
/// sum x_i <= budget, x >= 0. Water level found by bisection.
AllocationResult waterfill_total(const rvec& gains, double budget);

/// Separable per-antenna-constrained allocation: maximize
/// sum_m log2(1 + g_m x_m) over the polytope. Dual ascent with closed-form
/// generalized waterfilling in the inner step.
AllocationResult solve_separable_ppc(const rvec& gains, const PolytopeSpec& spec);

/// Non-separable allocation: maximize
/// (1/K) sum_k log2 |I + H_eff[k] diag(x_k) H_eff[k]*| over the polytope.
/// Logarithmic-barrier method with damped gradient ascent inner loops.
AllocationResult solve_logdet_ppc(const std::vector<cmat>& effective, const PolytopeSpec& spec);

/// Objective of solve_logdet_ppc at a given allocation, in bits.
double logdet_rate_objective(const std::vector<cmat>& effective, const rvec& x);

/// Analytic gradient of logdet_rate_objective:
/// g_m = (1 / (K ln 2)) h_m* (I + H X H*)^{-1} h_m.
rvec logdet_rate_gradient(const std::vector<cmat>& effective, const rvec& x);

} // namespace papc

#endif

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

#ifndef PAPC_LINALG_HPP
#define PAPC_LINALG_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace papc
{

using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;
using rmat = Eigen::MatrixXd;
using rvec = Eigen::VectorXd;
using cd = std::complex<double>;

/// Rotates each column so its first entry with magnitude > 1e-12 is real and
/// nonnegative. Makes eigen/singular bases deterministic and testable.
void apply_phase_convention(cmat& basis);

struct TruncatedSvd
{
    cmat u;  // m x rank, orthonormal columns
    rvec s;  // rank, descending
    cmat v;  // n x rank, orthonormal columns
};

/// Top-`rank` singular triplets of a complex matrix. Singular values are
/// sorted descending; each (u, v) pair is rotated by the phase of u's leading
/// entry. Throws std::invalid_argument if rank exceeds min(m, n).
TruncatedSvd svd_truncate(const cmat& matrix, int rank);

struct TopEigen
{
    cmat vectors;  // n x count, orthonormal columns, phase convention applied
    rvec values;   // count, descending
    double trace;  // trace of the full input matrix
};

/// Leading eigenpairs of a Hermitian matrix (descending eigenvalues).
TopEigen top_eigenvectors(const cmat& hermitian, int count);

/// log2 det of a Hermitian positive definite matrix via Cholesky.
double log2det_hpd(const cmat& hpd);

/// Orthonormal basis of the column space via Householder QR (thin factor).
cmat orthonormal_columns(const cmat& matrix);

/// max_ij |a_ij - b_ij|
double max_abs_diff(const cmat& a, const cmat& b);

} // namespace papc

#endif

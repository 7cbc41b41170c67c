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

#include "papc/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace papc
{

void apply_phase_convention(cmat& basis)
{
    for (Eigen::Index c = 0; c < basis.cols(); ++c)
    {
        for (Eigen::Index r = 0; r < basis.rows(); ++r)
        {
            const double mag = std::abs(basis(r, c));
            if (mag > 1e-12)
            {
                const cd rot = std::conj(basis(r, c)) / mag;
                basis.col(c) *= rot;
                break;
            }
        }
    }
}

TruncatedSvd svd_truncate(const cmat& matrix, int rank)
{
    const int max_rank = static_cast<int>(std::min(matrix.rows(), matrix.cols()));
    if (rank < 1 || rank > max_rank)
        throw std::invalid_argument("svd_truncate: rank must be in [1, min(rows, cols)]");

    // BDCSVD falls back to Jacobi below its internal size threshold, so small
    // factorizations keep Jacobi accuracy.
    Eigen::BDCSVD<cmat> svd(matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);

    TruncatedSvd out;
    out.u = svd.matrixU().leftCols(rank);
    out.v = svd.matrixV().leftCols(rank);
    out.s = svd.singularValues().head(rank);

    // One common phase per (u, v) pair, anchored on u's leading entry, keeps
    // u s v* unchanged.
    for (int c = 0; c < rank; ++c)
    {
        for (Eigen::Index r = 0; r < out.u.rows(); ++r)
        {
            const double mag = std::abs(out.u(r, c));
            if (mag > 1e-12)
            {
                const cd rot = std::conj(out.u(r, c)) / mag;
                out.u.col(c) *= rot;
                out.v.col(c) *= rot;
                break;
            }
        }
    }
    return out;
}

TopEigen top_eigenvectors(const cmat& hermitian, int count)
{
    if (hermitian.rows() != hermitian.cols())
        throw std::invalid_argument("top_eigenvectors: matrix must be square");
    if (count < 1 || count > hermitian.rows())
        throw std::invalid_argument("top_eigenvectors: count must be in [1, n]");

    Eigen::SelfAdjointEigenSolver<cmat> eig(hermitian);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("top_eigenvectors: eigendecomposition failed");

    const Eigen::Index n = hermitian.rows();
    TopEigen out;
    out.vectors.resize(n, count);
    out.values.resize(count);
    for (int c = 0; c < count; ++c)
    {
        // Eigen returns ascending order.
        out.vectors.col(c) = eig.eigenvectors().col(n - 1 - c);
        out.values(c) = eig.eigenvalues()(n - 1 - c);
    }
    apply_phase_convention(out.vectors);
    out.trace = eig.eigenvalues().sum();
    return out;
}

double log2det_hpd(const cmat& hpd)
{
    Eigen::LLT<cmat> llt(hpd);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("log2det_hpd: matrix is not positive definite");
    double acc = 0.0;
    for (Eigen::Index i = 0; i < hpd.rows(); ++i)
        acc += std::log2(std::real(llt.matrixLLT()(i, i)));
    return 2.0 * acc;
}

cmat orthonormal_columns(const cmat& matrix)
{
    Eigen::HouseholderQR<cmat> qr(matrix);
    cmat q = qr.householderQ() * cmat::Identity(matrix.rows(), matrix.cols());
    return q;
}

double max_abs_diff(const cmat& a, const cmat& b)
{
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace papc

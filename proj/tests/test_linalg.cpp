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
#include "papc/rng.hpp"

#include <doctest.h>

using namespace papc;

namespace
{

cmat random_complex(int rows, int cols, Rng& rng)
{
    cmat m(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r) m(r, c) = rng.complex_normal();
    return m;
}

} // namespace

TEST_CASE("svd_truncate on the identity keeps the leading axis")
{
    const TruncatedSvd svd = svd_truncate(cmat::Identity(2, 2), 1);
    CHECK(svd.s(0) == doctest::Approx(1.0));
    CHECK(std::abs(svd.u(0, 0) - cd(1, 0)) < 1e-12);
    CHECK(std::abs(svd.u(1, 0)) < 1e-12);
    CHECK(std::abs(svd.v(0, 0) - cd(1, 0)) < 1e-12);
}

TEST_CASE("svd_truncate recovers a rank-one outer product")
{
    Rng rng(7);
    cvec u = random_complex(5, 1, rng);
    cvec v = random_complex(3, 1, rng);
    u.normalize();
    v.normalize();
    const double sigma = 2.75;
    const cmat h = sigma * u * v.adjoint();

    const TruncatedSvd svd = svd_truncate(h, 1);
    CHECK(svd.s(0) == doctest::Approx(sigma));
    CHECK(max_abs_diff(svd.u.col(0) * svd.s(0) * svd.v.col(0).adjoint(), h) < 1e-12);
}

TEST_CASE("svd_truncate reconstruction and tail energy on a random matrix")
{
    Rng rng(13);
    const cmat h = random_complex(8, 4, rng);

    const TruncatedSvd full = svd_truncate(h, 4);
    const cmat diag = full.u.adjoint() * h * full.v;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
        {
            const cd expected = i == j ? cd(full.s(i), 0.0) : cd(0.0, 0.0);
            CHECK(std::abs(diag(i, j) - expected) < 1e-10);
        }

    const TruncatedSvd rank2 = svd_truncate(h, 2);
    const cmat approx = rank2.u * rank2.s.asDiagonal() * rank2.v.adjoint();
    const double tail = full.s(2) * full.s(2) + full.s(3) * full.s(3);
    CHECK((h - approx).squaredNorm() == doctest::Approx(tail).epsilon(1e-10));

    CHECK(full.s(0) >= full.s(1));
    CHECK(full.s(1) >= full.s(2));
    CHECK(full.s(2) >= full.s(3));
    CHECK_THROWS_AS(svd_truncate(h, 5), std::invalid_argument);
}

TEST_CASE("phase convention makes the leading significant entry real")
{
    Rng rng(21);
    cmat basis = random_complex(6, 3, rng);
    apply_phase_convention(basis);
    for (int c = 0; c < 3; ++c)
    {
        CHECK(std::abs(std::imag(basis(0, c))) < 1e-12);
        CHECK(std::real(basis(0, c)) >= 0.0);
    }
}

TEST_CASE("top_eigenvectors returns a descending orthonormal eigenbasis")
{
    Rng rng(5);
    const cmat a = random_complex(6, 6, rng);
    const cmat hermitian = a * a.adjoint();

    const TopEigen top = top_eigenvectors(hermitian, 3);
    CHECK(max_abs_diff(top.vectors.adjoint() * top.vectors, cmat::Identity(3, 3)) < 1e-10);
    CHECK(top.values(0) >= top.values(1));
    CHECK(top.values(1) >= top.values(2));
    for (int c = 0; c < 3; ++c)
        CHECK((hermitian * top.vectors.col(c) - top.values(c) * top.vectors.col(c)).norm() < 1e-9);
    CHECK(top.trace == doctest::Approx(std::real(hermitian.trace())));
}

TEST_CASE("log2det via Cholesky matches a direct determinant")
{
    Rng rng(3);
    const cmat a = random_complex(4, 4, rng);
    const cmat hpd = cmat::Identity(4, 4) + a * a.adjoint();
    CHECK(log2det_hpd(hpd) == doctest::Approx(std::log2(std::abs(hpd.determinant()))).epsilon(1e-10));
}

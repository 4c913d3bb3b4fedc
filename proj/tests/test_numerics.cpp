// SPDX-License-Identifier: Apache-2.0
//
// xlmimo: near-field multi-user XL-MIMO channel and beamforming simulation
// Copyright (C) 2026 The xlmimo authors
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

#include "oracles.hpp"
#include "xlmimo/errors.hpp"
#include "xlmimo/numerics.hpp"

#include <doctest.h>

#include <chrono>
#include <cmath>

using namespace xlmimo;
using namespace xlmimo::numerics;

namespace
{
    ComplexMatrix random_matrix(oracle::Rng &rng, std::size_t m, std::size_t n)
    {
        ComplexMatrix a(m, n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < m; ++i)
                a(i, j) = rng.normal_cplx();
        return a;
    }

    double vec_norm(std::span<const cplx> x)
    {
        return std::sqrt(norm_squared(x));
    }

    // x + sum_i w_i a_i (a_i^H x), applied without forming the matrix, in extended precision
    std::vector<oracle::lcplx> apply_covariance(const ComplexMatrix &A, std::span<const double> w, std::span<const cplx> x)
    {
        std::vector<oracle::lcplx> y(x.begin(), x.end());
        for (std::size_t i = 0; i < A.cols(); ++i)
        {
            const oracle::lcplx c = oracle::ld(w[i]) * oracle::inner(A.col(i), x);
            for (std::size_t r = 0; r < y.size(); ++r)
                y[r] += c * oracle::lcplx(A(r, i));
        }
        return y;
    }

    std::vector<std::vector<oracle::lcplx>> columns(const ComplexMatrix &A)
    {
        std::vector<std::vector<oracle::lcplx>> c;
        for (std::size_t j = 0; j < A.cols(); ++j)
            c.push_back(oracle::widen(A.col(j)));
        return c;
    }
}

TEST_CASE("compensated sum recovers cancelled terms")
{
    CompensatedSum s;
    s.add(1.0);
    for (int i = 0; i < 1000; ++i)
        s.add(1e-16);
    s.add(-1.0);
    CHECK(s.value() == doctest::Approx(1e-13).epsilon(1e-12));
}

TEST_CASE("dot and norm")
{
    const cvec x{{1, 2}, {3, -1}}, y{{0, 1}, {2, 2}};
    const cplx expected = std::conj(x[0]) * y[0] + std::conj(x[1]) * y[1];
    CHECK(std::abs(dot(x, y) - expected) < 1e-15);
    CHECK(norm_squared(x) == doctest::Approx(15));
    CHECK_THROWS_AS(dot(x, cvec(3)), dimension_error);
}

TEST_CASE("gram")
{
    ComplexMatrix e(4, 1);
    e(2, 0) = 1.0;
    const auto g1 = gram(e);
    CHECK(g1.rows() == 1);
    CHECK(g1(0, 0) == cplx(1.0));

    ComplexMatrix q(3, 2);
    q(0, 0) = cplx(0, 1);
    q(1, 1) = std::polar(1.0, 0.3);
    const auto g2 = gram(q);
    CHECK(std::abs(g2(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(g2(1, 1) - 1.0) < 1e-15);
    CHECK(std::abs(g2(0, 1)) < 1e-15);

    oracle::Rng rng(10);
    const auto a = random_matrix(rng, 50, 3);
    const auto g = gram(a);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
        {
            oracle::lcplx s = 0;
            for (std::size_t r = 0; r < 50; ++r)
                s += std::conj(oracle::lcplx(a(r, i))) * oracle::lcplx(a(r, j));
            CHECK(std::abs(oracle::lcplx(g(i, j)) - s) <= 1e-12 * std::abs(s) + 1e-13);
        }
}

TEST_CASE("hermitian_solve examples")
{
    ComplexMatrix I(3, 3), B(3, 2);
    for (std::size_t i = 0; i < 3; ++i)
        I(i, i) = 1.0;
    B(0, 0) = cplx(1, 2);
    B(2, 1) = cplx(-3, 0.5);
    const auto X = hermitian_solve(I, B);
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(std::abs(X(i, j) - B(i, j)) < 1e-15);

    ComplexMatrix D(2, 2), b(2, 1);
    D(0, 0) = 1.0;
    D(1, 1) = 2.0;
    b(0, 0) = 2.0;
    b(1, 0) = 2.0;
    const auto x = hermitian_solve(D, b);
    CHECK(std::abs(x(0, 0) - 2.0) < 1e-15);
    CHECK(std::abs(x(1, 0) - 1.0) < 1e-15);
}

TEST_CASE("hermitian_solve residual on random positive definite systems")
{
    oracle::Rng rng(12);
    for (int t = 0; t < 50; ++t)
    {
        const auto G = random_matrix(rng, 6, 6);
        auto H = gram(G);
        for (std::size_t i = 0; i < 6; ++i)
            H(i, i) += 1.0;
        const auto B = random_matrix(rng, 6, 2);
        const auto X = hermitian_solve(H, B);
        for (std::size_t j = 0; j < 2; ++j)
        {
            double res = 0, bn = 0;
            for (std::size_t i = 0; i < 6; ++i)
            {
                cplx s = 0;
                for (std::size_t k = 0; k < 6; ++k)
                    s += H(i, k) * X(k, j);
                res += std::norm(s - B(i, j));
                bn += std::norm(B(i, j));
            }
            CHECK(std::sqrt(res / bn) <= 1e-10);
        }
    }
}

TEST_CASE("hermitian factor contracts and near-singular detection")
{
    ComplexMatrix R(2, 3);
    CHECK_THROWS_AS(HermitianFactor{R}, contract_error);

    ComplexMatrix N(2, 2);
    N(0, 0) = 1.0;
    N(0, 1) = cplx(0, 1);
    N(1, 0) = cplx(0, 1); // not Hermitian
    N(1, 1) = 1.0;
    CHECK_THROWS_AS(HermitianFactor{N}, contract_error);

    // Gram of two nearly parallel vectors
    ComplexMatrix A(3, 2);
    A(0, 0) = 1.0;
    A(1, 0) = 1.0;
    A(0, 1) = 1.0;
    A(1, 1) = 1.0 + 1e-9;
    try
    {
        HermitianFactor f(gram(A));
        FAIL("expected near_singular");
    }
    catch (const near_singular &e)
    {
        CHECK(e.condition() > kDefaultMaxCondition);
    }

    ComplexMatrix S(2, 2);
    S(0, 0) = 1.0;
    S(1, 1) = 0.0;
    CHECK_THROWS_AS(HermitianFactor{S}, near_singular);

    // power spread alone is not ill-conditioning
    ComplexMatrix W(2, 2);
    W(0, 0) = 1e-20;
    W(1, 1) = 1e20;
    CHECK_NOTHROW(HermitianFactor{W});
}

TEST_CASE("project_orthogonal examples")
{
    ComplexMatrix e1(4, 1);
    e1(0, 0) = 1.0;
    const cvec x{1.0, 1.0, 0.0, 0.0};
    const auto y = project_orthogonal(e1, x);
    CHECK(std::abs(y[0]) < 1e-16);
    CHECK(std::abs(y[1] - 1.0) < 1e-16);
    CHECK(std::abs(y[2]) + std::abs(y[3]) < 1e-16);

    const cvec z{0.0, cplx(2, 1), 3.0, 0.0};
    const auto w = project_orthogonal(e1, z);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(std::abs(w[i] - z[i]) < 1e-16);

    const auto same = project_orthogonal(ComplexMatrix(4, 0), z);
    CHECK(same == z);

    ComplexMatrix dup(3, 2);
    dup(0, 0) = dup(0, 1) = 1.0;
    CHECK_THROWS_AS(project_orthogonal(dup, cvec(3, 1.0)), near_singular);
}

TEST_CASE("property: projection is orthogonal and idempotent")
{
    oracle::Rng rng(13);
    for (int t = 0; t < 50; ++t)
    {
        const std::size_t m = 200, k = rng.integer(1, 8);
        const auto A = random_matrix(rng, m, k);
        const auto x = rng.vec(m);
        const auto y = project_orthogonal(A, x);
        for (std::size_t j = 0; j < k; ++j)
            CHECK(std::abs(dot(A.col(j), y)) <= 1e-10 * vec_norm(x) * vec_norm(A.col(j)));
        const auto yy = project_orthogonal(A, y);
        double diff = 0;
        for (std::size_t i = 0; i < m; ++i)
            diff += std::norm(yy[i] - y[i]);
        CHECK(std::sqrt(diff) <= 1e-10 * vec_norm(x));
    }
}

TEST_CASE("whitened_apply examples")
{
    oracle::Rng rng(14);
    const auto x = rng.vec(5);
    const auto same = whitened_apply(ComplexMatrix(5, 0), std::vector<double>{}, x);
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(std::abs(same[i] - x[i]) < 1e-16);

    ComplexMatrix e1(5, 1);
    e1(0, 0) = 1.0;
    cvec b(5);
    b[0] = 1.0;
    const std::vector<double> w{1.0};
    const auto y = whitened_apply(e1, w, b);
    CHECK(std::abs(y[0] - 0.5) < 1e-15);
    for (std::size_t i = 1; i < 5; ++i)
        CHECK(std::abs(y[i]) < 1e-16);

    CHECK_THROWS_AS(whitened_apply(e1, std::vector<double>{0.0}, b), invalid_argument);
    CHECK_THROWS_AS(whitened_apply(e1, std::vector<double>{1.0, 2.0}, b), dimension_error);
}

TEST_CASE("property: whitened_apply inverts the covariance")
{
    oracle::Rng rng(15);
    for (int t = 0; t < 20; ++t)
    {
        const std::size_t m = 500, k = 9;
        const auto A = random_matrix(rng, m, k);
        std::vector<double> w(k);
        for (auto &p : w)
            p = std::pow(10.0, rng.uniform(-3, 3));
        const auto x = rng.vec(m);
        const auto y = whitened_apply(A, w, x);
        const auto cx = apply_covariance(A, w, y);
        double res = 0;
        for (std::size_t i = 0; i < m; ++i)
            res += double(std::norm(cx[i] - oracle::lcplx(x[i])));
        CHECK(std::sqrt(res) <= 1e-9 * vec_norm(x));
    }
}

TEST_CASE("property: whitened_apply stays accurate for strong interferers")
{
    // With w ||a||^2 up to 1e9 the residual of any double-precision result is limited by the
    // rounding of its entries, so accuracy is measured against an extended-precision solve
    oracle::Rng rng(19);
    for (int t = 0; t < 10; ++t)
    {
        const std::size_t m = 48, k = 5;
        const auto A = random_matrix(rng, m, k);
        std::vector<double> w(k);
        std::vector<oracle::ld> wl(k);
        for (std::size_t i = 0; i < k; ++i)
            wl[i] = w[i] = std::pow(10.0, rng.uniform(4, 7));
        const auto x = rng.vec(m);
        const auto ref = oracle::apply(oracle::inverse(oracle::covariance(columns(A), wl, m)), oracle::widen(x));
        const auto y = whitened_apply(A, w, x);
        double err = 0, n = 0;
        for (std::size_t i = 0; i < m; ++i)
        {
            err += double(std::norm(oracle::lcplx(y[i]) - ref[i]));
            n += double(std::norm(ref[i]));
        }
        CHECK(std::sqrt(err / n) <= 1e-10);
        // quadratic form used for the MMSE SINR
        const double q = dot(x, y).real();
        CHECK(oracle::rel_err(q, oracle::inner(oracle::widen(x), ref).real()) <= 1e-10);
    }
}

TEST_CASE("property: whitened_apply tends to the identity as weights vanish")
{
    oracle::Rng rng(16);
    const auto A = random_matrix(rng, 40, 3);
    const auto x = rng.vec(40);
    const std::vector<double> w(3, 1e-12);
    const auto y = whitened_apply(A, w, x);
    double diff = 0;
    for (std::size_t i = 0; i < 40; ++i)
        diff += std::norm(y[i] - x[i]);
    CHECK(std::sqrt(diff) <= 1e-9 * vec_norm(x));
}

TEST_CASE("property: structured operators match dense constructions")
{
    oracle::Rng rng(17);
    for (int t = 0; t < 40; ++t)
    {
        const std::size_t m = rng.integer(8, 64), k = rng.integer(1, 7);
        const auto A = random_matrix(rng, m, k);
        const auto x = rng.vec(m);
        std::vector<double> w(k);
        std::vector<oracle::ld> wl(k);
        for (std::size_t i = 0; i < k; ++i)
            wl[i] = w[i] = std::pow(10.0, rng.uniform(-2, 4));

        const auto cols = columns(A);
        const auto p_ref = oracle::apply(oracle::projector(cols, m), oracle::widen(x));
        const auto c_ref = oracle::apply(oracle::inverse(oracle::covariance(cols, wl, m)), oracle::widen(x));
        const auto p = project_orthogonal(A, x);
        const auto c = whitened_apply(A, w, x);
        double dp = 0, dc = 0, np = 0, nc = 0;
        for (std::size_t i = 0; i < m; ++i)
        {
            dp += double(std::norm(oracle::lcplx(p[i]) - p_ref[i]));
            dc += double(std::norm(oracle::lcplx(c[i]) - c_ref[i]));
            np += double(std::norm(p_ref[i]));
            nc += double(std::norm(c_ref[i]));
        }
        CHECK(std::sqrt(dp / np) <= 1e-9);
        CHECK(std::sqrt(dc / nc) <= 1e-9);
    }
}

TEST_CASE("structured operators scale to very large arrays")
{
    oracle::Rng rng(18);
    const std::size_t m = 40000, k = 9;
    const auto A = random_matrix(rng, m, k);
    const auto x = rng.vec(m);
    const std::vector<double> w(k, 1e5);
    const auto start = std::chrono::steady_clock::now();
    const auto p = project_orthogonal(A, x);
    const auto c = whitened_apply(A, w, x);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(p.size() == m);
    CHECK(c.size() == m);
    CHECK(secs < 5.0);
}

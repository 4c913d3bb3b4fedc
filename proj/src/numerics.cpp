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

#include "xlmimo/numerics.hpp"
#include "xlmimo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#if defined(__GNUC__) && defined(__x86_64__)
#include <immintrin.h>
#endif

namespace xlmimo::numerics
{
    namespace
    {
        // Eight running sums of exact products. For element k of x^H y the products are
        //   lane 0: xr yr, lane 1: xi yi, lane 2: xr yi, lane 3: -xi yr
        // with even k in lanes 0-3 and odd k in lanes 4-7. Each lane keeps s + c, where c collects
        // the rounding error of every product (TwoProduct) and addition (TwoSum). Both kernels
        // below compute the same exact error terms, so they agree bit for bit.
        struct ProductLanes
        {
            double s[8] = {};
            double c[8] = {};
        };

        inline void load_operands(const cplx &x, const cplx &y, double *a, double *b)
        {
            a[0] = x.real();
            a[1] = x.imag();
            a[2] = x.real();
            a[3] = -x.imag();
            b[0] = y.real();
            b[1] = y.imag();
            b[2] = y.imag();
            b[3] = y.real();
        }

        inline void split(double a, double &hi, double &lo)
        {
            const double t = 134217729.0 * a; // 2^27 + 1
            hi = t - (t - a);
            lo = a - hi;
        }

        void accumulate_dekker(const cplx *x, const cplx *y, std::size_t n, ProductLanes &L)
        {
            for (std::size_t k = 0; k < n; ++k)
            {
                double a[4], b[4];
                load_operands(x[k], y[k], a, b);
                const std::size_t o = 4 * (k & 1);
                for (std::size_t j = 0; j < 4; ++j)
                {
                    const double p = a[j] * b[j];
                    double ah, al, bh, bl;
                    split(a[j], ah, al);
                    split(b[j], bh, bl);
                    const double ep = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
                    double &s = L.s[o + j];
                    const double t = s + p;
                    const double z = t - s;
                    L.c[o + j] += ((s - (t - z)) + (p - z)) + ep;
                    s = t;
                }
            }
        }

#if defined(__GNUC__) && defined(__x86_64__)
#define XLMIMO_HAVE_FMA_KERNEL 1
        __attribute__((target("avx2,fma"))) void accumulate_fma(const cplx *x, const cplx *y, std::size_t n,
                                                                 ProductLanes &L)
        {
            const __m256d flip = _mm256_set_pd(-0.0, 0.0, 0.0, 0.0);
            __m256d s[2] = {_mm256_loadu_pd(L.s), _mm256_loadu_pd(L.s + 4)};
            __m256d c[2] = {_mm256_loadu_pd(L.c), _mm256_loadu_pd(L.c + 4)};
            const auto *xd = reinterpret_cast<const double *>(x);
            const auto *yd = reinterpret_cast<const double *>(y);
            for (std::size_t k = 0; k < n; ++k)
            {
                const std::size_t o = k & 1;
                // (xr, xi, xr, -xi) and (yr, yi, yi, yr)
                const __m128d xv = _mm_loadu_pd(xd + 2 * k);
                const __m128d yv = _mm_loadu_pd(yd + 2 * k);
                const __m256d a = _mm256_xor_pd(_mm256_set_m128d(xv, xv), flip);
                const __m256d b = _mm256_set_m128d(_mm_shuffle_pd(yv, yv, 1), yv);
                const __m256d p = _mm256_mul_pd(a, b);
                const __m256d ep = _mm256_fmsub_pd(a, b, p);
                const __m256d t = _mm256_add_pd(s[o], p);
                const __m256d z = _mm256_sub_pd(t, s[o]);
                const __m256d es = _mm256_add_pd(_mm256_sub_pd(s[o], _mm256_sub_pd(t, z)), _mm256_sub_pd(p, z));
                c[o] = _mm256_add_pd(c[o], _mm256_add_pd(es, ep));
                s[o] = t;
            }
            _mm256_storeu_pd(L.s, s[0]);
            _mm256_storeu_pd(L.s + 4, s[1]);
            _mm256_storeu_pd(L.c, c[0]);
            _mm256_storeu_pd(L.c + 4, c[1]);
        }

        bool cpu_has_fma()
        {
            static const bool has = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
            return has;
        }
#endif

        // Lanes first, first + 1 and their odd-index partners, in a fixed order
        double combine(const ProductLanes &L, std::size_t first)
        {
            const std::size_t idx[4] = {first, first + 1, first + 4, first + 5};
            CompensatedSum out;
            for (std::size_t i : idx)
                out.add(L.s[i]);
            for (std::size_t i : idx)
                out.add(L.c[i]);
            return out.value();
        }
    }

    cplx dot(std::span<const cplx> x, std::span<const cplx> y)
    {
        if (x.size() != y.size())
            throw dimension_error("dot: vectors of length " + std::to_string(x.size()) + " and " +
                                  std::to_string(y.size()) + ".");
        ProductLanes lanes;
#ifdef XLMIMO_HAVE_FMA_KERNEL
        if (cpu_has_fma())
            accumulate_fma(x.data(), y.data(), x.size(), lanes);
        else
            accumulate_dekker(x.data(), y.data(), x.size(), lanes);
#else
        accumulate_dekker(x.data(), y.data(), x.size(), lanes);
#endif
        return {combine(lanes, 0), combine(lanes, 2)};
    }

    double norm_squared(std::span<const cplx> x)
    {
        CompensatedSum s;
        for (const auto &v : x)
            s.add(std::norm(v));
        return s.value();
    }

    ComplexMatrix ComplexMatrix::from_columns(const std::vector<cvec> &columns)
    {
        if (columns.empty())
            return {};
        const std::size_t rows = columns.front().size();
        ComplexMatrix A(rows, columns.size());
        for (std::size_t j = 0; j < columns.size(); ++j)
        {
            if (columns[j].size() != rows)
                throw dimension_error("from_columns: column " + std::to_string(j) + " has length " +
                                      std::to_string(columns[j].size()) + ", expected " + std::to_string(rows) + ".");
            std::copy(columns[j].begin(), columns[j].end(), A.col(j).begin());
        }
        return A;
    }

    ComplexMatrix ComplexMatrix::without_column(std::size_t j) const
    {
        if (j >= cols_)
            throw dimension_error("without_column: column index out of range.");
        ComplexMatrix out(rows_, cols_ - 1);
        for (std::size_t c = 0, o = 0; c < cols_; ++c)
        {
            if (c == j)
                continue;
            std::copy(col(c).begin(), col(c).end(), out.col(o++).begin());
        }
        return out;
    }

    cvec adjoint_times(const ComplexMatrix &A, std::span<const cplx> x)
    {
        if (x.size() != A.rows())
            throw dimension_error("adjoint_times: vector length does not match matrix rows.");
        cvec out(A.cols());
        for (std::size_t j = 0; j < A.cols(); ++j)
            out[j] = dot(A.col(j), x);
        return out;
    }

    void subtract_product(const ComplexMatrix &A, std::span<const cplx> c, std::span<cplx> y)
    {
        if (c.size() != A.cols() || y.size() != A.rows())
            throw dimension_error("subtract_product: shape mismatch.");
        for (std::size_t j = 0; j < A.cols(); ++j)
        {
            const auto a = A.col(j);
            const double cr = c[j].real();
            const double ci = c[j].imag();
            for (std::size_t i = 0; i < y.size(); ++i)
            {
                const double ar = a[i].real();
                const double ai = a[i].imag();
                y[i] = {y[i].real() - (ar * cr - ai * ci), y[i].imag() - (ar * ci + ai * cr)};
            }
        }
    }

    ComplexMatrix gram(const ComplexMatrix &A)
    {
        const std::size_t n = A.cols();
        ComplexMatrix G(n, n);
        for (std::size_t j = 0; j < n; ++j)
        {
            G(j, j) = norm_squared(A.col(j));
            for (std::size_t i = 0; i < j; ++i)
            {
                G(i, j) = dot(A.col(i), A.col(j));
                G(j, i) = std::conj(G(i, j));
            }
        }
        return G;
    }

    HermitianFactor::HermitianFactor(const ComplexMatrix &H, double max_condition)
        : n_(H.rows()), scale_(H.rows()), lower_(H.rows(), H.rows())
    {
        if (H.rows() != H.cols())
            throw contract_error("HermitianFactor: matrix is not square.");

        double max_abs = 0.0;
        for (std::size_t j = 0; j < n_; ++j)
            for (std::size_t i = 0; i < n_; ++i)
                max_abs = std::max(max_abs, std::abs(H(i, j)));
        for (std::size_t j = 0; j < n_; ++j)
            for (std::size_t i = 0; i <= j; ++i)
                if (std::abs(H(i, j) - std::conj(H(j, i))) > 1e-10 * max_abs)
                    throw contract_error("HermitianFactor: matrix is not Hermitian.");

        for (std::size_t i = 0; i < n_; ++i)
        {
            const double h = H(i, i).real();
            if (!(h > 0.0) || !std::isfinite(h))
                throw near_singular("HermitianFactor: non-positive diagonal entry.",
                                    std::numeric_limits<double>::infinity());
            scale_[i] = 1.0 / std::sqrt(h);
        }

        // Cholesky on S H S, lower triangle
        double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
        for (std::size_t j = 0; j < n_; ++j)
        {
            double diag = H(j, j).real() * scale_[j] * scale_[j];
            for (std::size_t k = 0; k < j; ++k)
                diag -= std::norm(lower_(j, k));
            if (!(diag > 0.0))
                throw near_singular("HermitianFactor: matrix is numerically singular.",
                                    std::numeric_limits<double>::infinity());
            const double ljj = std::sqrt(diag);
            lower_(j, j) = ljj;
            dmin = std::min(dmin, ljj);
            dmax = std::max(dmax, ljj);

            for (std::size_t i = j + 1; i < n_; ++i)
            {
                cplx v = H(i, j) * (scale_[i] * scale_[j]);
                for (std::size_t k = 0; k < j; ++k)
                    v -= lower_(i, k) * std::conj(lower_(j, k));
                lower_(i, j) = v / ljj;
            }
        }

        if (n_ > 0)
            condition_ = (dmax / dmin) * (dmax / dmin);
        if (condition_ > max_condition)
            throw near_singular("HermitianFactor: condition estimate " + std::to_string(condition_) +
                                    " exceeds limit " + std::to_string(max_condition) + ".",
                                condition_);
    }

    cvec HermitianFactor::scaled_forward(std::span<const cplx> b) const
    {
        if (b.size() != n_)
            throw dimension_error("HermitianFactor: right-hand side length mismatch.");
        cvec y(n_);
        for (std::size_t i = 0; i < n_; ++i)
        {
            cplx v = b[i] * scale_[i];
            for (std::size_t k = 0; k < i; ++k)
                v -= lower_(i, k) * y[k];
            y[i] = v / lower_(i, i).real();
        }
        return y;
    }

    cvec HermitianFactor::solve(std::span<const cplx> b) const
    {
        cvec y = scaled_forward(b);
        for (std::size_t ii = n_; ii-- > 0;)
        {
            cplx v = y[ii];
            for (std::size_t k = ii + 1; k < n_; ++k)
                v -= std::conj(lower_(k, ii)) * y[k];
            y[ii] = v / lower_(ii, ii).real();
        }
        for (std::size_t i = 0; i < n_; ++i)
            y[i] *= scale_[i];
        return y;
    }

    double HermitianFactor::inverse_quadratic_form(std::span<const cplx> b) const
    {
        const cvec y = scaled_forward(b);
        return norm_squared(y);
    }

    ComplexMatrix hermitian_solve(const ComplexMatrix &H, const ComplexMatrix &B, double max_condition)
    {
        if (B.rows() != H.rows())
            throw dimension_error("hermitian_solve: right-hand side rows do not match.");
        const HermitianFactor f(H, max_condition);
        ComplexMatrix X(B.rows(), B.cols());
        for (std::size_t j = 0; j < B.cols(); ++j)
        {
            const cvec x = f.solve(B.col(j));
            std::copy(x.begin(), x.end(), X.col(j).begin());
        }
        return X;
    }

    cvec project_orthogonal(const ComplexMatrix &A, const HermitianFactor &gram_factor, std::span<const cplx> x)
    {
        if (x.size() != A.rows())
            throw dimension_error("project_orthogonal: vector length does not match matrix rows.");
        cvec y(x.begin(), x.end());
        if (A.cols() == 0)
            return y;
        if (gram_factor.size() != A.cols())
            throw dimension_error("project_orthogonal: Gram factor size does not match matrix columns.");

        // Second pass removes what rounding left of the span after the first
        for (int pass = 0; pass < 2; ++pass)
        {
            const cvec c = gram_factor.solve(adjoint_times(A, y));
            subtract_product(A, c, y);
        }
        return y;
    }

    cvec project_orthogonal(const ComplexMatrix &A, std::span<const cplx> x, double max_condition)
    {
        if (A.cols() == 0)
            return cvec(x.begin(), x.end());
        const HermitianFactor f(gram(A), max_condition);
        return project_orthogonal(A, f, x);
    }

    HermitianFactor woodbury_core(const ComplexMatrix &gram_A, std::span<const double> weights)
    {
        if (weights.size() != gram_A.rows())
            throw dimension_error("whitened_apply: one weight per column required.");
        ComplexMatrix core = gram_A;
        for (std::size_t i = 0; i < weights.size(); ++i)
        {
            if (!(weights[i] > 0.0))
                throw invalid_argument("whitened_apply: weights must be positive.");
            core(i, i) += 1.0 / weights[i];
        }
        // Always positive definite for positive weights
        return HermitianFactor(core, std::numeric_limits<double>::infinity());
    }

    cvec whitened_apply(const ComplexMatrix &A, const ComplexMatrix &gram_A, std::span<const double> weights,
                        std::span<const cplx> x)
    {
        if (x.size() != A.rows())
            throw dimension_error("whitened_apply: vector length does not match matrix rows.");
        cvec y(x.begin(), x.end());
        if (A.cols() == 0)
            return y;
        const HermitianFactor core = woodbury_core(gram_A, weights);
        const auto apply_inverse = [&](cvec &v) {
            const cvec c = core.solve(adjoint_times(A, v));
            subtract_product(A, c, v);
        };
        apply_inverse(y);

        // One refinement pass: r = x - C y with C = I + A diag(w) A^H applied matrix-free, y += C^{-1} r
        cvec t = adjoint_times(A, y);
        for (std::size_t i = 0; i < t.size(); ++i)
            t[i] *= weights[i];
        cvec r(x.size());
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] = x[i] - y[i];
        subtract_product(A, t, r);
        apply_inverse(r);
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] += r[i];
        return y;
    }

    cvec whitened_apply(const ComplexMatrix &A, std::span<const double> weights, std::span<const cplx> x)
    {
        return whitened_apply(A, gram(A), weights, x);
    }
}

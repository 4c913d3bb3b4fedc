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

#ifndef XLMIMO_NUMERICS_HPP
#define XLMIMO_NUMERICS_HPP

#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

// Structured complex linear algebra for tall channel matrices (M rows, few columns).
// Nothing here ever forms an M x M matrix: projections and covariance inverses are applied
// through the small K x K Gram matrix, so every apply costs O(M K + K^3).

namespace xlmimo::numerics
{
    using cplx = std::complex<double>;
    using cvec = std::vector<cplx>;

    // Default limit on the condition estimate of hermitian_solve: 1 / (1e3 * machine epsilon)
    inline constexpr double kDefaultMaxCondition = 1.0 / (1e3 * std::numeric_limits<double>::epsilon());

    // Neumaier-compensated accumulator. Sums are always taken in index order so results are
    // reproducible bit for bit.
    class CompensatedSum
    {
    public:
        void add(double v)
        {
            const double t = sum_ + v;
            if (std::abs(sum_) >= std::abs(v))
                carry_ += (sum_ - t) + v;
            else
                carry_ += (v - t) + sum_;
            sum_ = t;
        }
        double value() const { return sum_ + carry_; }

    private:
        double sum_ = 0.0;
        double carry_ = 0.0;
    };

    // x^H y
    cplx dot(std::span<const cplx> x, std::span<const cplx> y);

    // ||x||^2
    double norm_squared(std::span<const cplx> x);

    // Column-major dense complex matrix
    class ComplexMatrix
    {
    public:
        ComplexMatrix() = default;
        ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

        // Stacks equally long vectors as columns; throws dimension_error on length mismatch
        static ComplexMatrix from_columns(const std::vector<cvec> &columns);

        std::size_t rows() const { return rows_; }
        std::size_t cols() const { return cols_; }

        cplx &operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
        const cplx &operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

        std::span<cplx> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
        std::span<const cplx> col(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }

        // Copy of this matrix without column j
        ComplexMatrix without_column(std::size_t j) const;

    private:
        std::size_t rows_ = 0;
        std::size_t cols_ = 0;
        cvec data_;
    };

    // A^H x
    cvec adjoint_times(const ComplexMatrix &A, std::span<const cplx> x);

    // y -= A c
    void subtract_product(const ComplexMatrix &A, std::span<const cplx> c, std::span<cplx> y);

    // A^H A (n x n, Hermitian PSD), compensated inner products
    ComplexMatrix gram(const ComplexMatrix &A);

    // Cholesky factorization of a Hermitian positive definite matrix after symmetric diagonal
    // scaling. The condition estimate (max L_ii / min L_ii)^2 is taken on the scaled factor,
    // so it reflects collinearity of the underlying vectors rather than their power spread.
    class HermitianFactor
    {
    public:
        // Throws contract_error when H is not square/Hermitian (relative 1e-10) and
        // near_singular when factorization fails or the estimate exceeds max_condition.
        explicit HermitianFactor(const ComplexMatrix &H, double max_condition = kDefaultMaxCondition);

        std::size_t size() const { return n_; }
        double condition_estimate() const { return condition_; }

        // H^{-1} b
        cvec solve(std::span<const cplx> b) const;

        // b^H H^{-1} b (real, non-negative)
        double inverse_quadratic_form(std::span<const cplx> b) const;

    private:
        cvec scaled_forward(std::span<const cplx> b) const; // L^{-1} S b

        std::size_t n_ = 0;
        std::vector<double> scale_; // S = diag(1 / sqrt(H_ii))
        ComplexMatrix lower_;       // L, with S H S = L L^H
        double condition_ = 1.0;
    };

    // X with H X = B
    ComplexMatrix hermitian_solve(const ComplexMatrix &H, const ComplexMatrix &B,
                                  double max_condition = kDefaultMaxCondition);

    // (I - A (A^H A)^{-1} A^H) x, applied through the Gram matrix of A with one refinement pass.
    // A with zero columns returns x unchanged. Throws near_singular if A is rank deficient.
    cvec project_orthogonal(const ComplexMatrix &A, std::span<const cplx> x,
                            double max_condition = kDefaultMaxCondition);

    // Same, reusing a factorization of gram(A)
    cvec project_orthogonal(const ComplexMatrix &A, const HermitianFactor &gram_factor, std::span<const cplx> x);

    // (I + sum_i w_i a_i a_i^H)^{-1} x through the Woodbury identity:
    //   x - A (diag(1/w) + A^H A)^{-1} A^H x
    // Weights must be positive. gram_A may be passed to skip recomputing A^H A.
    cvec whitened_apply(const ComplexMatrix &A, std::span<const double> weights, std::span<const cplx> x);
    cvec whitened_apply(const ComplexMatrix &A, const ComplexMatrix &gram_A, std::span<const double> weights,
                        std::span<const cplx> x);

    // Factor of diag(1/w) + gram_A, the small matrix inside whitened_apply
    HermitianFactor woodbury_core(const ComplexMatrix &gram_A, std::span<const double> weights);
}

#endif

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

#ifndef XLMIMO_BEAMFORMING_HPP
#define XLMIMO_BEAMFORMING_HPP

#include "xlmimo/channel.hpp"
#include "xlmimo/geometry.hpp"
#include "xlmimo/numerics.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace xlmimo
{
    enum class Scheme
    {
        mrc,
        zf,
        mmse
    };

    inline constexpr Scheme kAllSchemes[] = {Scheme::mrc, Scheme::zf, Scheme::mmse};

    std::string_view to_string(Scheme scheme);

    // Interferer Gram condition estimates above this count as collinear channels. The same
    // threshold decides ZF infeasibility: ||a_k||^2 / ||P_perp a_k||^2 > kCollinearityLimit.
    inline constexpr double kCollinearityLimit = 1e12;

    // K users in front of one array, with linear transmit SNRs P_k = P_k / sigma^2
    class Scenario
    {
    public:
        // Throws invalid_argument when K = 0, sizes differ or any SNR is not positive
        Scenario(ArrayGeometry geom, std::vector<UserLocation> users, std::vector<double> snr, ChannelModel model,
                 UpwConfig upw);

        const ArrayGeometry &geometry() const { return geom_; }
        const std::vector<UserLocation> &users() const { return users_; }
        const std::vector<double> &snr() const { return snr_; }
        ChannelModel model() const { return model_; }
        const UpwConfig &upw() const { return upw_; }
        std::size_t num_users() const { return users_.size(); }

        std::vector<ResponseVector> responses() const;

    private:
        ArrayGeometry geom_;
        std::vector<UserLocation> users_;
        std::vector<double> snr_;
        ChannelModel model_;
        UpwConfig upw_;
    };

    // Channel matrix A = [a_1 ... a_K] with its Gram matrix, computed once and shared by all
    // per-user evaluations
    class UplinkChannels
    {
    public:
        UplinkChannels(numerics::ComplexMatrix channels, std::vector<double> snr);
        static UplinkChannels from_scenario(const Scenario &scenario);

        const numerics::ComplexMatrix &matrix() const { return A_; }
        const numerics::ComplexMatrix &gram() const { return G_; }
        const std::vector<double> &snr() const { return snr_; }
        std::size_t num_users() const { return A_.cols(); }
        std::size_t num_antennas() const { return A_.rows(); }
        double power(std::size_t k) const { return G_(k, k).real(); } // ||a_k||^2

        // Gram matrix of the interferers of user k (G without row and column k)
        numerics::ComplexMatrix interferer_gram(std::size_t k) const;

    private:
        numerics::ComplexMatrix A_;
        numerics::ComplexMatrix G_;
        std::vector<double> snr_;
    };

    struct BeamformerReport
    {
        Scheme scheme = Scheme::mrc;
        std::size_t user = 0;
        numerics::cvec v;             // unit norm, v^H a_k real and non-negative; empty if ZF is infeasible
        double sinr = 0.0;            // linear
        double loss_factor = 0.0;     // alpha in [0, 1], sinr = single_user_snr * (1 - alpha)
        double single_user_snr = 0.0; // P_k ||a_k||^2
        bool zf_infeasible = false;   // a_k inside the interferer span; sinr reported as 0
    };

    struct SinrResult
    {
        double sinr = 0.0;
        double loss_factor = 0.0;
        bool zf_infeasible = false;
    };

    // a / ||a||; throws degenerate_channel for a zero vector
    numerics::cvec mrc(std::span<const numerics::cplx> a);

    // Unit vector along the projection of a_k onto the orthogonal complement of the other channels.
    // Throws invalid_argument if K > M, near_singular if the interferers are collinear and
    // zf_infeasible if a_k lies in their span.
    numerics::cvec zf(const UplinkChannels &ch, std::size_t k);

    // Unit vector along C_k^{-1} a_k, C_k = I + sum_{i != k} P_i a_i a_i^H
    numerics::cvec mmse(const UplinkChannels &ch, std::size_t k);

    numerics::cvec beamformer(Scheme scheme, const UplinkChannels &ch, std::size_t k);

    // P_k |v^H a_k|^2 / (sum_{i != k} P_i |v^H a_i|^2 + 1) for a unit-norm v.
    // Throws contract_error if | ||v|| - 1 | > 1e-9.
    double sinr(std::span<const numerics::cplx> v, const UplinkChannels &ch, std::size_t k);

    // SINR and loss factor straight from the channel statistics, without forming v.
    // ZF infeasibility is reported through the flag (sinr 0, loss 1) instead of thrown.
    SinrResult sinr_closed(Scheme scheme, const UplinkChannels &ch, std::size_t k);

    // Beamformer plus closed-form SINR
    BeamformerReport evaluate(Scheme scheme, const UplinkChannels &ch, std::size_t k);

    // Two-user SINRs of user 1 written in terms of ||a_1||^2, ||a_2||^2 and their correlation
    struct TwoUserSinrs
    {
        double mrc = 0.0;
        double zf = 0.0;
        double mmse = 0.0;
        double correlation = 0.0;
    };

    TwoUserSinrs two_user_sinrs(double power1, double power2, double correlation, double snr1, double snr2);
    TwoUserSinrs two_user_sinrs(const ResponseVector &a1, const ResponseVector &a2, double snr1, double snr2);

    // sum_k log2(1 + gamma_k), bps/Hz
    double sum_rate(std::span<const double> sinrs);
}

#endif

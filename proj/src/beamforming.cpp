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

#include "xlmimo/beamforming.hpp"
#include "xlmimo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace xlmimo
{
    using numerics::cplx;
    using numerics::cvec;

    namespace
    {
        void check_user(const UplinkChannels &ch, std::size_t k)
        {
            if (k >= ch.num_users())
                throw invalid_argument("User index " + std::to_string(k) + " out of range.");
            if (!(ch.power(k) > 0.0))
                throw degenerate_channel("User " + std::to_string(k) + " has a zero-power channel.");
        }

        std::vector<double> interferer_snr(const UplinkChannels &ch, std::size_t k)
        {
            std::vector<double> w;
            w.reserve(ch.num_users() - 1);
            for (std::size_t i = 0; i < ch.num_users(); ++i)
                if (i != k)
                    w.push_back(ch.snr()[i]);
            return w;
        }

        // Normalize y and rotate it so that v^H a is real and non-negative
        cvec canonical_unit(cvec y, std::span<const cplx> a)
        {
            const double n = std::sqrt(numerics::norm_squared(y));
            if (!(n > 0.0))
                throw degenerate_channel("Beamformer direction vanished.");
            // (y c)^H a = conj(c) y^H a, real positive for c = (y^H a / |y^H a|) / n
            const cplx ya = numerics::dot(y, a);
            const cplx c = (std::abs(ya) > 0.0 ? ya / std::abs(ya) : cplx(1.0)) / n;
            for (auto &e : y)
                e *= c;
            return y;
        }

        struct ZfProjection
        {
            cvec y;
            double residual_power = 0.0;
            bool infeasible = false;
        };

        ZfProjection zf_project(const UplinkChannels &ch, std::size_t k)
        {
            check_user(ch, k);
            if (ch.num_users() > ch.num_antennas())
                throw invalid_argument("Zero forcing needs at least as many antennas as users.");

            const auto a = ch.matrix().col(k);
            ZfProjection out;
            if (ch.num_users() == 1)
            {
                out.y.assign(a.begin(), a.end());
                out.residual_power = ch.power(k);
                return out;
            }
            const auto Abar = ch.matrix().without_column(k);
            const numerics::HermitianFactor f(ch.interferer_gram(k), kCollinearityLimit);
            out.y = numerics::project_orthogonal(Abar, f, a);
            out.residual_power = numerics::norm_squared(out.y);
            out.infeasible = !(out.residual_power * kCollinearityLimit > ch.power(k));
            return out;
        }

        cvec mmse_direction(const UplinkChannels &ch, std::size_t k)
        {
            check_user(ch, k);
            const auto a = ch.matrix().col(k);
            if (ch.num_users() == 1)
                return cvec(a.begin(), a.end());
            const auto w = interferer_snr(ch, k);
            return numerics::whitened_apply(ch.matrix().without_column(k), ch.interferer_gram(k), w, a);
        }
    }

    std::string_view to_string(Scheme scheme)
    {
        switch (scheme)
        {
        case Scheme::mrc:
            return "mrc";
        case Scheme::zf:
            return "zf";
        case Scheme::mmse:
            return "mmse";
        }
        return "?";
    }

    Scenario::Scenario(ArrayGeometry geom, std::vector<UserLocation> users, std::vector<double> snr,
                       ChannelModel model, UpwConfig upw)
        : geom_(std::move(geom)), users_(std::move(users)), snr_(std::move(snr)), model_(model), upw_(upw)
    {
        if (users_.empty())
            throw invalid_argument("A scenario needs at least one user.");
        if (snr_.size() != users_.size())
            throw invalid_argument("One transmit SNR per user is required.");
        for (double p : snr_)
            if (!(p > 0.0) || !std::isfinite(p))
                throw invalid_argument("Transmit SNRs must be positive and finite.");
        if (model_ == ChannelModel::upw && !(upw_.beta0 > 0.0))
            throw invalid_argument("UPW scenarios need a positive beta0.");
    }

    std::vector<ResponseVector> Scenario::responses() const
    {
        std::vector<ResponseVector> out;
        out.reserve(users_.size());
        for (const auto &u : users_)
            out.push_back(response(model_, geom_, u, upw_));
        return out;
    }

    UplinkChannels::UplinkChannels(numerics::ComplexMatrix channels, std::vector<double> snr)
        : A_(std::move(channels)), snr_(std::move(snr))
    {
        if (A_.cols() == 0)
            throw invalid_argument("At least one user channel is required.");
        if (snr_.size() != A_.cols())
            throw dimension_error("One transmit SNR per channel column is required.");
        for (double p : snr_)
            if (!(p > 0.0) || !std::isfinite(p))
                throw invalid_argument("Transmit SNRs must be positive and finite.");
        G_ = numerics::gram(A_);
    }

    UplinkChannels UplinkChannels::from_scenario(const Scenario &scenario)
    {
        const auto rs = scenario.responses();
        numerics::ComplexMatrix A(scenario.geometry().size(), rs.size());
        for (std::size_t k = 0; k < rs.size(); ++k)
            std::copy(rs[k].entries.begin(), rs[k].entries.end(), A.col(k).begin());
        return UplinkChannels(std::move(A), scenario.snr());
    }

    numerics::ComplexMatrix UplinkChannels::interferer_gram(std::size_t k) const
    {
        const std::size_t n = num_users();
        numerics::ComplexMatrix out(n - 1, n - 1);
        for (std::size_t j = 0, oj = 0; j < n; ++j)
        {
            if (j == k)
                continue;
            for (std::size_t i = 0, oi = 0; i < n; ++i)
            {
                if (i == k)
                    continue;
                out(oi++, oj) = G_(i, j);
            }
            ++oj;
        }
        return out;
    }

    cvec mrc(std::span<const cplx> a)
    {
        const double p = numerics::norm_squared(a);
        if (!(p > 0.0))
            throw degenerate_channel("MRC of a zero-power channel.");
        const double n = std::sqrt(p);
        cvec v(a.begin(), a.end());
        for (auto &e : v)
            e /= n;
        return v;
    }

    cvec zf(const UplinkChannels &ch, std::size_t k)
    {
        auto proj = zf_project(ch, k);
        if (proj.infeasible)
            throw zf_infeasible("User " + std::to_string(k) + " channel lies in the span of the interferers.");
        return canonical_unit(std::move(proj.y), ch.matrix().col(k));
    }

    cvec mmse(const UplinkChannels &ch, std::size_t k)
    {
        return canonical_unit(mmse_direction(ch, k), ch.matrix().col(k));
    }

    cvec beamformer(Scheme scheme, const UplinkChannels &ch, std::size_t k)
    {
        switch (scheme)
        {
        case Scheme::mrc:
            check_user(ch, k);
            return mrc(ch.matrix().col(k));
        case Scheme::zf:
            return zf(ch, k);
        case Scheme::mmse:
            return mmse(ch, k);
        }
        throw invalid_argument("Unknown beamforming scheme.");
    }

    double sinr(std::span<const cplx> v, const UplinkChannels &ch, std::size_t k)
    {
        if (k >= ch.num_users())
            throw invalid_argument("User index " + std::to_string(k) + " out of range.");
        if (v.size() != ch.num_antennas())
            throw dimension_error("Beamformer length does not match the array size.");
        const double vn = std::sqrt(numerics::norm_squared(v));
        if (std::abs(vn - 1.0) > 1e-9)
            throw contract_error("Beamformer must have unit norm, got " + std::to_string(vn) + ".");

        const auto &A = ch.matrix();
        double signal = 0.0;
        numerics::CompensatedSum interference;
        for (std::size_t i = 0; i < ch.num_users(); ++i)
        {
            const double g = ch.snr()[i] * std::norm(numerics::dot(v, A.col(i)));
            if (i == k)
                signal = g;
            else
                interference.add(g);
        }
        return signal / (interference.value() + 1.0);
    }

    SinrResult sinr_closed(Scheme scheme, const UplinkChannels &ch, std::size_t k)
    {
        check_user(ch, k);
        const double pk = ch.snr()[k];
        const double power = ch.power(k);
        const double single = pk * power;
        SinrResult out;

        switch (scheme)
        {
        case Scheme::mrc:
        {
            // sum_i P_i rho_ki ||a_i||^2 = sum_i P_i |a_k^H a_i|^2 / ||a_k||^2
            numerics::CompensatedSum s;
            for (std::size_t i = 0; i < ch.num_users(); ++i)
                if (i != k)
                    s.add(ch.snr()[i] * std::norm(ch.gram()(k, i)) / power);
            out.sinr = single / (s.value() + 1.0);
            out.loss_factor = s.value() / (s.value() + 1.0);
            return out;
        }
        case Scheme::zf:
        {
            const auto proj = zf_project(ch, k);
            if (proj.infeasible)
            {
                out.sinr = 0.0;
                out.loss_factor = 1.0;
                out.zf_infeasible = true;
                return out;
            }
            out.sinr = pk * proj.residual_power;
            out.loss_factor = std::clamp(1.0 - proj.residual_power / power, 0.0, 1.0);
            return out;
        }
        case Scheme::mmse:
        {
            const cvec y = mmse_direction(ch, k);
            const double q = std::max(0.0, numerics::dot(ch.matrix().col(k), y).real()); // a_k^H C_k^{-1} a_k
            out.sinr = pk * q;
            out.loss_factor = std::clamp(1.0 - q / power, 0.0, 1.0);
            return out;
        }
        }
        throw invalid_argument("Unknown beamforming scheme.");
    }

    BeamformerReport evaluate(Scheme scheme, const UplinkChannels &ch, std::size_t k)
    {
        BeamformerReport r;
        r.scheme = scheme;
        r.user = k;
        const auto closed = sinr_closed(scheme, ch, k);
        r.sinr = closed.sinr;
        r.loss_factor = closed.loss_factor;
        r.zf_infeasible = closed.zf_infeasible;
        r.single_user_snr = ch.snr()[k] * ch.power(k);
        if (!r.zf_infeasible)
            r.v = beamformer(scheme, ch, k);
        return r;
    }

    TwoUserSinrs two_user_sinrs(double power1, double power2, double correlation, double snr1, double snr2)
    {
        if (!(power1 > 0.0) || !(power2 > 0.0))
            throw degenerate_channel("Two-user SINR needs non-zero channel powers.");
        const double single = snr1 * power1;
        const double interferer = snr2 * power2;
        TwoUserSinrs out;
        out.correlation = correlation;
        out.mrc = single / (interferer * correlation + 1.0);
        out.zf = single * (1.0 - correlation);
        out.mmse = single * (1.0 - interferer * correlation / (1.0 + interferer));
        return out;
    }

    TwoUserSinrs two_user_sinrs(const ResponseVector &a1, const ResponseVector &a2, double snr1, double snr2)
    {
        return two_user_sinrs(channel_power(a1), channel_power(a2), correlation(a1, a2), snr1, snr2);
    }

    double sum_rate(std::span<const double> sinrs)
    {
        double r = 0.0;
        for (double g : sinrs)
        {
            if (!(g >= 0.0))
                throw invalid_argument("SINR values must be non-negative.");
            r += std::log2(1.0 + g);
        }
        return r;
    }
}

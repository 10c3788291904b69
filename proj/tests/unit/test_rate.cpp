// SPDX-License-Identifier: Apache-2.0
//
// stpnc - space-time physical-layer network coding simulator
// Copyright (C) 2026 The stpnc authors
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

#include <catch2/catch_amalgamated.hpp>

#include "stpnc/rate.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/expint.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace stpnc;

namespace
{
// E[log2(1 + rho X)], X ~ Exp(1), by numerical integration.
double ergodic_oracle(double rho)
{
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate([rho](double x) { return std::log2(1.0 + rho * x) * std::exp(-x); });
}

NetworkConfig two_pair()
{
    return NetworkConfig{};
}
} // namespace

TEST_CASE("ergodic oracle - quadrature agrees with the exponential integral")
{
    for (double rho : {0.1, 1.0, 10.0, 100.0})
    {
        const double closed = std::exp(1.0 / rho) * boost::math::expint(1, 1.0 / rho) / std::log(2.0);
        CHECK(std::abs(ergodic_oracle(rho) - closed) < 1e-9 * closed);
    }
}

TEST_CASE("rate::uplink_rate - axis example and vanishing SNR")
{
    ChannelSet ch = draw_channels(two_pair(), 3, Seed{1});
    ch.user_relay(0, 4, 2) = CVector::Zero(2);
    ch.user_relay(0, 4, 2)(0) = 1.0;
    ch.user_relay(0, 3, 2) = CVector::Zero(2);
    ch.user_relay(0, 3, 2)(1) = 1.0;
    CHECK(std::abs(rate::uplink_rate(ch, 1.0, 1.0) - 1.0) < 1e-14);
    CHECK(rate::uplink_rate(ch, 1.0, 1e12) < 1e-11);
}

TEST_CASE("rate::uplink_rate - ergodic mean matches the oracle")
{
    const int n = 100000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        acc += rate::uplink_rate(draw_channels(two_pair(), 3, derive_trial_seed(Seed{5}, i)), 10.0, 1.0);
    CHECK(std::abs(acc / n - ergodic_oracle(10.0)) < 0.01 * ergodic_oracle(10.0));
}

TEST_CASE("rate::downlink_rate - algebraic identity and vanishing SNR")
{
    ChannelSet ch = draw_channels(two_pair(), 3, Seed{2});
    // v_13 is forced to [0, 1] and user 1 sees it with gain sqrt(1.5).
    ch.relay_user(4, 0, 3) = CRowVector::Zero(2);
    ch.relay_user(4, 0, 3)(0) = 1.0;
    ch.relay_user(1, 0, 3) = CRowVector::Zero(2);
    ch.relay_user(1, 0, 3)(1) = std::sqrt(1.5);
    ch.user_user(1, 3, 2) = 1.0;
    const PrecoderSet p = design_twic(ch);
    CHECK(std::abs(rate::downlink_gain(ch, p) - 2.5) < 1e-14);
    CHECK(std::abs(rate::downlink_rate(ch, p, 1.0, 1.0) - 1.0) < 1e-14);
    CHECK(rate::downlink_rate(ch, p, 1.0, 1e15) < 1e-12);
}

TEST_CASE("rate::downlink_rate - finite and positive over 1e4 seeds")
{
    for (std::uint64_t s = 0; s < 10000; ++s)
    {
        const ChannelSet ch = draw_channels(two_pair(), 3, Seed{s});
        const double r = rate::downlink_rate(ch, design_twic(ch), 1.0, 0.1);
        REQUIRE(std::isfinite(r));
        REQUIRE(r > 0.0);
    }
}

TEST_CASE("rate::df_pair_rate - minimum of the two hops")
{
    for (std::uint64_t s = 0; s < 10000; ++s)
    {
        const ChannelSet ch = draw_channels(two_pair(), 3, Seed{s});
        const PrecoderSet p = design_twic(ch);
        const double up = rate::uplink_rate(ch, 1.0, 0.05);
        const double down = rate::downlink_rate(ch, p, 1.0, 0.05);
        REQUIRE(rate::df_pair_rate(ch, p, 1.0, 0.05) == std::min(up, down));
    }
}

TEST_CASE("rate::stpnc_sum_rate - single trial equals hand computation")
{
    const Seed seed{44};
    const ChannelSet ch = draw_channels(two_pair(), 3, derive_trial_seed(seed, 0));
    const double hand = 4.0 / 3.0 * rate::df_pair_rate(ch, design_twic(ch), 1.0, 0.1);
    const rate::Estimate e = rate::stpnc_sum_rate(10.0, 1, seed, 1);
    CHECK(std::abs(e.mean - hand) < 1e-12);
    CHECK(e.stderr_ == 0.0);
}

TEST_CASE("rate::stpnc_sum_rate - stderr shrinks like 1/sqrt(trials)")
{
    const rate::Estimate small = rate::stpnc_sum_rate(10.0, 2500, Seed{8});
    const rate::Estimate large = rate::stpnc_sum_rate(10.0, 10000, Seed{9});
    CHECK(std::abs(small.stderr_ / large.stderr_ - 2.0) < 0.2 * 2.0);
    const rate::Estimate half = rate::stpnc_sum_rate(10.0, 5000, Seed{10});
    CHECK(std::abs(half.stderr_ / large.stderr_ - std::sqrt(2.0)) < 0.2 * std::sqrt(2.0));
}

TEST_CASE("rate::stpnc_sum_rate - beats TDMA at 20 dB")
{
    const rate::Estimate st = rate::stpnc_sum_rate(20.0, 10000, Seed{3});
    const rate::Estimate td = rate::tdma_sum_rate(20.0, 10000, Seed{3});
    CHECK(st.mean > td.mean);
}

TEST_CASE("rate::tdma_sum_rate - oracle, vanishing SNR and monotonicity")
{
    const rate::Estimate e = rate::tdma_sum_rate(10.0, 100000, Seed{6});
    CHECK(std::abs(e.mean - ergodic_oracle(10.0)) < 0.01 * ergodic_oracle(10.0));
    CHECK(rate::tdma_sum_rate(-80.0, 100, Seed{6}).mean < 1e-7);

    rate::RateConfig cfg;
    for (int db = -10; db <= 40; db += 5) cfg.snr_db_list.push_back(db);
    cfg.trials = 2000;
    const rate::RateResult r = rate::snr_sweep(cfg);
    for (std::size_t i = 1; i < r.points.size(); ++i)
    {
        CHECK(r.points[i].tdma.mean > r.points[i - 1].tdma.mean);
        CHECK(r.points[i].stpnc.mean > r.points[i - 1].stpnc.mean);
    }
}

TEST_CASE("rate::snr_sweep - crossover, slope ratio and determinism")
{
    rate::RateConfig cfg;
    for (int db = 0; db <= 30; ++db) cfg.snr_db_list.push_back(db);
    cfg.trials = 10000;
    cfg.seed = Seed{0};
    const rate::RateResult r = rate::snr_sweep(cfg);
    REQUIRE(r.crossover_db.has_value());
    CHECK(std::abs(*r.crossover_db - 8.0) <= 2.0);

    const rate::RateResult again = rate::snr_sweep(cfg);
    CHECK(again.crossover_db == r.crossover_db);
    for (std::size_t i = 0; i < r.points.size(); ++i) CHECK(again.points[i].stpnc.mean == r.points[i].stpnc.mean);

    rate::RateConfig high = cfg;
    high.snr_db_list.clear();
    for (int db = 30; db <= 50; ++db) high.snr_db_list.push_back(db);
    const double ratio = rate::slope_ratio(rate::snr_sweep(high), 30.0, 50.0);
    CHECK(std::abs(ratio - 4.0 / 3.0) < 0.05 * 4.0 / 3.0);
}

TEST_CASE("rate::snr_sweep - linear interpolation of the crossover")
{
    // Reproduce the crossing from the two grid points that bracket it.
    rate::RateConfig cfg;
    cfg.snr_db_list = {7.0, 9.0};
    cfg.trials = 10000;
    const rate::RateResult s = rate::snr_sweep(cfg);
    const auto& p0 = s.points[0];
    const auto& p1 = s.points[1];
    const double d0 = p0.stpnc.mean - p0.tdma.mean, d1 = p1.stpnc.mean - p1.tdma.mean;
    REQUIRE(d0 <= 0.0);
    REQUIRE(d1 > 0.0);
    CHECK(std::abs(*s.crossover_db - (7.0 + 2.0 * (-d0) / (d1 - d0))) < 1e-12);
}

TEST_CASE("rate::RateConfig - validation and CSV layout")
{
    rate::RateConfig cfg;
    CHECK_THROWS_AS(rate::snr_sweep(cfg), std::invalid_argument);
    cfg.snr_db_list = {0.0};
    cfg.trials = 0;
    CHECK_THROWS_AS(rate::snr_sweep(cfg), std::invalid_argument);

    cfg.trials = 3;
    std::ostringstream os;
    rate::write_csv(os, rate::snr_sweep(cfg));
    const std::string text = os.str();
    CHECK(text.rfind("snr_db,stpnc_rate,stpnc_stderr,tdma_rate,tdma_stderr\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
}

TEST_CASE("rate::snr_sweep - identical for every job count")
{
    rate::RateConfig one;
    one.snr_db_list = {0.0, 8.0, 20.0};
    one.trials = 3000;
    one.seed = Seed{17};
    one.jobs = 1;
    rate::RateConfig four = one;
    four.jobs = 4;
    const rate::RateResult a = rate::snr_sweep(one), b = rate::snr_sweep(four);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i)
    {
        CHECK(a.points[i].stpnc.mean == b.points[i].stpnc.mean);
        CHECK(a.points[i].stpnc.stderr_ == b.points[i].stpnc.stderr_);
        CHECK(a.points[i].tdma.mean == b.points[i].tdma.mean);
    }
}

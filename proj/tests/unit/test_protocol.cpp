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

#include "stpnc/errors.hpp"
#include "stpnc/protocol.hpp"

#include <cmath>

using namespace stpnc;

namespace
{
struct Fixture
{
    Schedule sched;
    ChannelSet ch;
    PrecoderSet p;
    SymbolVector syms;
};

Fixture make(Scenario sc, int users, std::vector<int> antennas, std::uint64_t seed)
{
    NetworkConfig cfg;
    cfg.users = users;
    cfg.relay_antennas = std::move(antennas);
    Schedule sched = make_schedule(sc, users);
    ChannelSet ch = draw_channels(cfg, sched.total_slots(), Seed{seed});
    PrecoderSet p = design_precoders(sched, ch);
    SymbolVector syms = draw_symbols(sched, Seed{seed + 1000});
    return {std::move(sched), std::move(ch), std::move(p), std::move(syms)};
}

EquationLedger full_ledger(const Fixture& f, RelayMode mode)
{
    EquationLedger l = run_phase1(f.sched, f.ch, f.syms, 0.0, Seed{1});
    const RelayTransmitPlan plan = relay_process(l, f.p, f.sched, f.ch, mode);
    return run_phase2(std::move(l), plan, f.p, f.sched, f.ch, 0.0, Seed{2});
}
} // namespace

TEST_CASE("run_phase1 - TWIC side-information equations")
{
    const Fixture f = make(Scenario::twic, 4, {2}, 1);
    const EquationLedger l = run_phase1(f.sched, f.ch, f.syms, 0.0, Seed{1});

    const Equation* y3 = l.find(3, 1);
    REQUIRE(y3 != nullptr);
    REQUIRE(y3->coeffs.size() == 2);
    CHECK(y3->coeffs.at({3, 1}) == f.ch.user_user(3, 1, 1));
    CHECK(y3->coeffs.at({4, 2}) == f.ch.user_user(3, 2, 1));
    const cplx want = f.ch.user_user(3, 1, 1) * f.syms.values.at({3, 1}) + f.ch.user_user(3, 2, 1) * f.syms.values.at({4, 2});
    CHECK(y3->observed == want);

    // Users never store equations for slots they transmit in.
    CHECK(l.find(1, 1) == nullptr);
    CHECK(l.find(1, 2) != nullptr);

    // Two slots times two antennas: four scalar equations over all four symbols.
    REQUIRE(l.relays.size() == 2);
    std::set<SymbolId> covered;
    Eigen::Index rows = 0;
    for (const RelayObservation& r : l.relays)
    {
        rows += r.observed.size();
        for (const auto& [s, h] : r.coeffs) covered.insert(s);
    }
    CHECK(rows == 4);
    CHECK(covered.size() == 4);
    CHECK(ledger_linearity_residual(l, f.syms) < 1e-15);
}

TEST_CASE("run_phase1 - noise enters the stored equations")
{
    const Fixture f = make(Scenario::twic, 4, {2}, 2);
    const EquationLedger l = run_phase1(f.sched, f.ch, f.syms, 1e-2, Seed{1});
    const double r = ledger_linearity_residual(l, f.syms);
    CHECK(r > 1e-4);
    CHECK(r < 1.0);
}

TEST_CASE("relay_process - decode_forward recovers every TWIC symbol")
{
    const Fixture f = make(Scenario::twic, 4, {2}, 3);
    const EquationLedger l = run_phase1(f.sched, f.ch, f.syms, 0.0, Seed{1});
    const RelayTransmitPlan plan = relay_process(l, f.p, f.sched, f.ch, RelayMode::decode_forward);
    REQUIRE(plan.decoded.size() == 4);
    for (const auto& [s, v] : f.syms.values) CHECK(std::abs(plan.decoded.at(s) - v) < 1e-9);
}

TEST_CASE("relay_process - linear_forward equals the brute-force sum")
{
    const Fixture f = make(Scenario::case1, 4, {2, 2}, 4);
    const EquationLedger l = run_phase1(f.sched, f.ch, f.syms, 0.0, Seed{1});
    const RelayTransmitPlan plan = relay_process(l, f.p, f.sched, f.ch, RelayMode::linear_forward);
    for (int t : f.sched.phase2_slots())
    {
        for (int relay = 0; relay < 2; ++relay)
        {
            CVector want = CVector::Zero(2);
            for (int k = 1; k <= 4; ++k)
            {
                const CMatrix& v = f.p.per_block.at({t, k})[static_cast<std::size_t>(relay)];
                want += v * l.find_relay(relay, k)->observed;
            }
            want *= f.p.slot_gain.at(t);
            CHECK(linalg::max_abs(plan.transmit.at(t)[static_cast<std::size_t>(relay)] - want) < 1e-14);
        }
    }

    // Zero stored signals give a zero plan.
    EquationLedger silent = l;
    for (RelayObservation& r : silent.relays) r.observed.setZero();
    const RelayTransmitPlan quiet = relay_process(silent, f.p, f.sched, f.ch, RelayMode::linear_forward);
    for (const auto& [t, xs] : quiet.transmit)
        for (const CVector& x : xs) CHECK(x.isZero(0.0));
}

TEST_CASE("relay_process - mode and precoder mismatch")
{
    const Fixture f = make(Scenario::twic, 4, {2}, 5);
    const EquationLedger l = run_phase1(f.sched, f.ch, f.syms, 0.0, Seed{1});
    CHECK_THROWS_AS(relay_process(l, f.p, f.sched, f.ch, RelayMode::linear_forward), std::invalid_argument);

    // A single-antenna relay cannot separate two simultaneous transmissions.
    const Fixture g = make(Scenario::case1, 3, {1, 1, 1}, 5);
    const EquationLedger lg = run_phase1(g.sched, g.ch, g.syms, 0.0, Seed{1});
    CHECK_THROWS_AS(relay_process(lg, g.p, g.sched, g.ch, RelayMode::decode_forward), RankDeficient);
}

TEST_CASE("run_phase2 - TWIC neutralisation at user 1")
{
    const Fixture f = make(Scenario::twic, 4, {2}, 6);
    const EquationLedger l = full_ledger(f, RelayMode::decode_forward);
    const Equation* e = l.find(1, 3);
    REQUIRE(e != nullptr);
    CHECK(std::abs(e->coeffs.at({4, 2})) < 1e-10);
    CHECK(e->leakage.count({4, 2}) == 1);
    CHECK(e->desired.count({1, 3}) == 1);
    CHECK(e->self_interference.count({3, 1}) == 1);
    CHECK(e->resolvable_interference.count({2, 4}) == 1);
    CHECK(ledger_linearity_residual(l, f.syms) < 1e-12);
}

TEST_CASE("run_phase2 - TWXC overheard interference replays y_1[4]")
{
    const Fixture f = make(Scenario::twxc, 4, {2}, 7);
    const EquationLedger l = full_ledger(f, RelayMode::decode_forward);
    const Equation* y4 = l.find(1, 4);
    const Equation* y5 = l.find(1, 5);
    REQUIRE(y4 != nullptr);
    REQUIRE(y5 != nullptr);
    REQUIRE(y5->overheard_interference.size() == 2);
    cplx l_oi = 0.0;
    for (const auto& [s, c] : y5->overheard_interference)
    {
        CHECK(std::abs(c - y4->coeffs.at(s)) < 1e-9);
        l_oi += c * f.syms.values.at(s);
    }
    CHECK(std::abs(l_oi - y4->observed) < 1e-9);
    CHECK(alignment_identity_residual(l, f.sched, f.syms) < 1e-9);
}

TEST_CASE("run_phase2 - zero precoders give zero observations")
{
    Fixture f = make(Scenario::twic, 4, {2}, 8);
    for (auto& [key, v] : f.p.per_symbol) v.setZero();
    const EquationLedger l = full_ledger(f, RelayMode::decode_forward);
    for (int j = 1; j <= 4; ++j) CHECK(l.find(j, 3)->observed == cplx{});
}

TEST_CASE("decode_user - TWIC effective matrix")
{
    const Fixture f = make(Scenario::twic, 4, {2}, 9);
    const EquationLedger l = full_ledger(f, RelayMode::decode_forward);
    const DecodeResult d = decode_user(1, l, f.sched, own_symbols(f.sched, f.syms, 1));
    REQUIRE(d.unknowns == std::vector<SymbolId>{{1, 3}, {2, 4}});
    CMatrix want(2, 2);
    want << f.ch.user_user(1, 3, 2), f.ch.user_user(1, 4, 2),
        (f.ch.relay_user(1, 0, 3) * f.p.per_symbol.at({3, SymbolId{1, 3}}))(0),
        (f.ch.relay_user(1, 0, 3) * f.p.per_symbol.at({3, SymbolId{2, 4}}))(0);
    CHECK(linalg::max_abs(d.effective - want) < 1e-14);
    CHECK(d.rank == 2);
    CHECK(std::abs(d.recovered.at({1, 3}) - f.syms.values.at({1, 3})) < 1e-9);
}

TEST_CASE("decode_user - TWIC effective rank is two over 100 seeds")
{
    for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
        const Fixture f = make(Scenario::twic, 4, {2}, seed);
        const EquationLedger l = full_ledger(f, RelayMode::decode_forward);
        for (int u = 1; u <= 4; ++u) CHECK(decode_user(u, l, f.sched, own_symbols(f.sched, f.syms, u)).rank == 2);
    }
}

TEST_CASE("decode_user - case1 and case2 system sizes")
{
    const Fixture c1 = make(Scenario::case1, 3, {2}, 10);
    const EquationLedger l1 = full_ledger(c1, RelayMode::linear_forward);
    for (int u = 1; u <= 3; ++u)
    {
        const DecodeResult d = decode_user(u, l1, c1.sched, own_symbols(c1.sched, c1.syms, u));
        CHECK(d.effective.rows() == 2);
        CHECK(d.effective.cols() == 2);
        for (const SymbolId& s : c1.sched.desired_by(u)) CHECK(std::abs(d.recovered.at(s) - c1.syms.values.at(s)) < 1e-9);
    }

    const Fixture c2 = make(Scenario::case2, 4, {2}, 11);
    const EquationLedger l2 = full_ledger(c2, RelayMode::linear_forward);
    for (int u = 1; u <= 4; ++u)
    {
        const DecodeResult d = decode_user(u, l2, c2.sched, own_symbols(c2.sched, c2.syms, u));
        CHECK(d.rank == 2);
        CHECK(c2.sched.desired_by(u).size() == 2);
        CHECK(d.alignment_residual < 1e-9);
        CHECK(d.leakage < 1e-9);
    }
}

TEST_CASE("decode_user - missing equations are reported")
{
    const Fixture f = make(Scenario::twic, 4, {2}, 12);
    EquationLedger l = run_phase1(f.sched, f.ch, f.syms, 0.0, Seed{1});
    CHECK_THROWS_AS(decode_user(1, l, f.sched, own_symbols(f.sched, f.syms, 1)), std::invalid_argument);
}

TEST_CASE("run_end_to_end - paper DoF values")
{
    NetworkConfig two_pair;
    const SimReport twic = run_end_to_end(Scenario::twic, two_pair, Seed{1});
    CHECK(twic.achieved_dof == Rational(4, 3));
    CHECK(twic.symbols_delivered == 4);
    CHECK(twic.max_symbol_error < 1e-8);

    const SimReport twxc = run_end_to_end(Scenario::twxc, two_pair, Seed{1});
    CHECK(twxc.achieved_dof == Rational(8, 5));
    CHECK(twxc.alignment_residual < 1e-9);

    NetworkConfig c1;
    c1.users = 4;
    c1.relay_antennas = {3};
    const SimReport r = run_end_to_end(Scenario::case1, c1, Seed{1});
    CHECK(r.achieved_dof == Rational(2));
    CHECK(r.constraint_residual < 1e-9);

    c1.relay_antennas = {2};
    CHECK_THROWS_AS(run_end_to_end(Scenario::case1, c1, Seed{1}), AntennaDeficit);

    NetworkConfig wrong;
    wrong.users = 5;
    CHECK_THROWS_AS(run_end_to_end(Scenario::twic, wrong, Seed{1}), std::invalid_argument);
}

TEST_CASE("run_end_to_end - relay modes agree without noise")
{
    NetworkConfig cfg;
    cfg.users = 3;
    const SimReport lf = run_end_to_end(Scenario::case1, cfg, Seed{5}, RelayMode::linear_forward);
    const SimReport df = run_end_to_end(Scenario::case1, cfg, Seed{5}, RelayMode::decode_forward);
    for (const auto& [s, v] : lf.recovered) CHECK(std::abs(df.recovered.at(s) - v) < 1e-9);
}

TEST_CASE("run_end_to_end - noisy run degrades gracefully")
{
    NetworkConfig cfg;
    cfg.noise_var = 1e-8;
    const SimReport r = run_end_to_end(Scenario::twxc, cfg, Seed{3});
    CHECK(r.max_symbol_error > 0.0);
    CHECK(r.max_symbol_error < 1e-1);
    CHECK(r.constraint_residual < 1e-9);
}

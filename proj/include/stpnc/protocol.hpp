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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "stpnc/channel.hpp"
#include "stpnc/linalg.hpp"
#include "stpnc/precoder.hpp"
#include "stpnc/rational.hpp"
#include "stpnc/scheduler.hpp"

namespace stpnc {

using CoeffMap = std::map<SymbolId, cplx>;

struct SymbolVector {
  CoeffMap values;
};

// Unit-power CN(0,1) symbols for every symbol of the schedule.
SymbolVector draw_symbols(const Schedule& sched, Seed seed);

// Symbols sent by `user`, i.e. what it can cancel as self-interference.
CoeffMap own_symbols(const Schedule& sched, const SymbolVector& syms, int user);

// One scalar observation at a user. Observations are stored after the
// receiver divides out the known transmit amplitude (sqrt(P) in phase 1, the
// relay slot gain in phase 2), so coefficients are the bare channel and
// precoder products.
struct Equation {
  int slot = 0;
  CoeffMap coeffs;
  cplx observed{};
  // Phase-2 split of `coeffs` by the receiver's relation to each symbol.
  CoeffMap desired;
  CoeffMap self_interference;
  CoeffMap overheard_interference;
  CoeffMap resolvable_interference;
  CoeffMap leakage;
};

// M_l equations heard by one relay in one phase-1 slot.
struct RelayObservation {
  int slot = 0;
  int relay = 0;
  CVector observed;
  std::map<SymbolId, CVector> coeffs;
};

struct EquationLedger {
  std::map<int, std::vector<Equation>> users;
  std::vector<RelayObservation> relays;

  const Equation* find(int user, int slot) const;
  const RelayObservation* find_relay(int relay, int slot) const;
};

enum class RelayMode { decode_forward, linear_forward };

std::string to_string(RelayMode m);

struct RelayTransmitPlan {
  RelayMode mode = RelayMode::decode_forward;
  // Phase-2 slot -> transmitted vector per relay (gain included).
  std::map<int, std::vector<CVector>> transmit;
  std::map<int, double> gain;
  // Symbols recovered at relay 0 (decode_forward only).
  CoeffMap decoded;
};

// Side-information learning: every listening user stores one equation per
// slot and every relay one equation per antenna per slot. noise_var is
// sigma^2 at the receiver; after normalisation by sqrt(P) the stored noise
// has variance sigma^2 / P.
EquationLedger run_phase1(const Schedule& sched, const ChannelSet& ch, const SymbolVector& syms,
                          double noise_var, Seed seed);

// Builds the relays' phase-2 transmissions. decode_forward zero-forces each
// phase-1 slot at each relay and re-encodes; linear_forward applies
// V^l[t,k] directly to the stored observations and needs per-block
// precoders. Throws RankDeficient when a relay cannot decode.
RelayTransmitPlan relay_process(const EquationLedger& ledger, const PrecoderSet& p,
                                const Schedule& sched, const ChannelSet& ch, RelayMode mode,
                                const linalg::Tolerance& tol = linalg::kDefaultTolerance);

// Space-time relay transmission: appends one equation per user per phase-2
// slot. Coefficients come from the channels and precoders; observations come
// from the transmitted vectors, so the two are independent routes.
EquationLedger run_phase2(EquationLedger ledger, const RelayTransmitPlan& plan,
                          const PrecoderSet& p, const Schedule& sched, const ChannelSet& ch,
                          double noise_var, Seed seed);

struct DecodeResult {
  std::vector<SymbolId> unknowns;  // columns of the effective matrix
  CMatrix effective;
  CVector rhs;
  CoeffMap recovered;
  Eigen::Index rank = 0;
  // Largest coefficient left on own symbols after self-interference removal.
  double self_residual = 0.0;
  // Largest mismatch between relayed and overheard interference coefficients.
  double alignment_residual = 0.0;
  // Largest coefficient on symbols the relays were meant to neutralise.
  double leakage = 0.0;
};

// Self-interference cancellation, overheard-interference cancellation, then
// zero forcing on the stacked remaining equations. Throws RankDeficient when
// the effective matrix loses column rank.
DecodeResult decode_user(int user, const EquationLedger& ledger, const Schedule& sched,
                         const CoeffMap& own,
                         const linalg::Tolerance& tol = linalg::kDefaultTolerance);

// max |observed - sum coeff * s| over every stored equation.
double ledger_linearity_residual(const EquationLedger& ledger, const SymbolVector& syms);

// max over users with an aligned slot m and phase-2 slots t of
// |L_OI[t] - y[m]|, both as values and coefficient-wise.
double alignment_identity_residual(const EquationLedger& ledger, const Schedule& sched,
                                   const SymbolVector& syms);

struct SimReport {
  Scenario scenario = Scenario::twic;
  int users = 0;
  std::uint64_t seed = 0;
  RelayMode relay_mode = RelayMode::decode_forward;
  CoeffMap recovered;
  // max |s_hat - s| over desired symbols, relative to the RMS symbol value.
  double max_symbol_error = 0.0;
  std::map<int, Eigen::Index> effective_ranks;
  int slots_used = 0;
  int symbols_delivered = 0;
  Rational achieved_dof{0};
  double constraint_residual = 0.0;
  double alignment_residual = 0.0;
  double leakage_residual = 0.0;
  double self_residual = 0.0;
  double ledger_residual = 0.0;
};

RelayMode default_relay_mode(Scenario s);

// Full pipeline for one seed: channels, precoders, both phases and every
// user's decoder. Propagates AntennaDeficit and RankDeficient.
SimReport run_end_to_end(Scenario scenario, const NetworkConfig& cfg, Seed seed,
                         std::optional<RelayMode> mode = std::nullopt,
                         const linalg::Tolerance& tol = linalg::kDefaultTolerance);

}  // namespace stpnc

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

#include <map>
#include <utility>
#include <vector>

#include "stpnc/channel.hpp"
#include "stpnc/linalg.hpp"
#include "stpnc/scheduler.hpp"

namespace stpnc {

enum class PrecoderMode { per_symbol, per_block };

// Relay precoders for every phase-2 slot.
//
// per_symbol (two-pair examples, single relay): one beam v per (t, symbol),
// applied to symbols the relay decoded. per_block (general networks): one
// M_l x M_l matrix V^l[t,k] per relay, applied to the vector the relay heard
// in phase-1 slot k.
//
// Beams and matrices satisfy the neutralisation/alignment constraints
// exactly. Power is set separately through slot_gain: in slot t the relays
// transmit slot_gain[t] times the precoded signal, chosen so the expected
// total transmit power equals P. Receivers know the gain and divide it out.
struct PrecoderSet {
  PrecoderMode mode = PrecoderMode::per_symbol;
  std::map<std::pair<int, SymbolId>, CVector> per_symbol;
  std::map<std::pair<int, int>, std::vector<CMatrix>> per_block;
  std::map<int, double> slot_gain;
  // Largest violation of the synthesis systems, |A f - b|.
  double residual = 0.0;
};

// g^l_{j,R,i}[t,k] = h^l_{R,i}[k]^T (x) h^l_{j,R}[t]^*, a 1 x M_l^2 row with
// g * vec(V) = h^*_{j,R}[t] V h_{R,i}[k].
CRowVector effective_channel(const ChannelSet& ch, int j, int relay, int t, int k, int i);

PrecoderSet design_twic(const ChannelSet& ch);
PrecoderSet design_twxc(const ChannelSet& ch);

// Stacked neutralisation matrix for block (t, k): one row per (i, j) with
// i in S_k, j != i, j != k, in lexicographic (i, j) order; each row is the
// concatenation over relays of g^l_{j,R,i}[t,k]. Shape
// (k1-1)(k1-2) x sum M_l^2.
CMatrix build_stacked_constraints_case1(const ChannelSet& ch, int k1, int t, int k);

// Throws AntennaDeficit when a stacked matrix has a trivial null space.
PrecoderSet design_case1(const ChannelSet& ch, int k1);
// Throws AntennaDeficit when an alignment system is inconsistent.
PrecoderSet design_case2(const ChannelSet& ch, int k2);

// Dispatches on sched.scenario().
PrecoderSet design_precoders(const Schedule& sched, const ChannelSet& ch);

// End-to-end relay-path coefficient of symbol s at user j in phase-2 slot t,
// before slot_gain: h^*_{j,R}[t] v for per_symbol sets and
// sum_l h^{l*}_{j,R}[t] V^l[t,k] h^l_{R,i}[k] for per_block sets. Missing
// precoders count as zero.
cplx relay_path_coefficient(const PrecoderSet& p, const ChannelSet& ch, const Schedule& sched,
                            int j, int t, SymbolId s);

// Maximum absolute constraint violation over every phase-2 slot, symbol and
// bystander user, recomputed from the raw channels. A user that overheard the
// symbol in its aligned slot must see h_{j,src}[k]; a user that neither sent,
// wants nor can resolve the symbol must see zero.
double verify_constraints(const PrecoderSet& p, const ChannelSet& ch, const Schedule& sched);

// Fills p.slot_gain for every phase-2 slot of `sched`.
void apply_power_normalization(PrecoderSet& p, const ChannelSet& ch, const Schedule& sched);

}  // namespace stpnc

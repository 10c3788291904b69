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

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace stpnc {

enum class Scenario { twic, twxc, case1, case2 };

std::string to_string(Scenario s);
// Throws std::invalid_argument on unknown names.
Scenario scenario_from_string(const std::string& name);

// Symbol s_{dest,src}: sent by user `src`, wanted by user `dest`.
struct SymbolId {
  int dest = 0;
  int src = 0;
  auto operator<=>(const SymbolId&) const = default;
};

std::string to_string(SymbolId id);

// Node in a slot plan. All relays act together, so the relay side is a
// single collective node.
struct NodeId {
  enum class Kind { user, relays };
  Kind kind = Kind::user;
  int user = 0;

  static NodeId of_user(int k) { return {Kind::user, k}; }
  static NodeId relay_group() { return {Kind::relays, 0}; }
  auto operator<=>(const NodeId&) const = default;
};

struct Transmission {
  int sender = 0;
  SymbolId symbol;
};

struct SlotPlan {
  std::vector<NodeId> sources;
  std::vector<NodeId> destinations;
  bool relay_listen = false;
  // Phase-1 only: one symbol per transmitting user, in source order.
  std::vector<Transmission> transmissions;
};

// Which phase-1 observations a user feeds to its decoder. `direct` slots
// carry at least one symbol the user wants and become rows of the
// effective decoding matrix; the `aligned` slot holds an overheard
// equation that the relays reproduce and that is subtracted as a whole.
struct UserRole {
  std::vector<int> direct_slots;
  std::optional<int> aligned_slot;
};

class Schedule {
 public:
  Schedule(Scenario scenario, int users, std::vector<SlotPlan> slots, int phase1_len);

  Scenario scenario() const { return scenario_; }
  int users() const { return users_; }
  int phase1_len() const { return phase1_len_; }
  int phase2_len() const { return static_cast<int>(slots_.size()) - phase1_len_; }
  int total_slots() const { return static_cast<int>(slots_.size()); }

  // t is 1-based.
  const SlotPlan& slot(int t) const;
  bool is_phase1(int t) const { return t >= 1 && t <= phase1_len_; }
  std::vector<int> phase2_slots() const;

  // (slot, transmitter) -> symbol for every phase-1 transmission.
  const std::map<std::pair<int, int>, SymbolId>& symbol_plan() const { return plan_; }
  // Symbols in order of first transmission.
  const std::vector<SymbolId>& symbols() const { return symbols_; }
  // Phase-1 slot in which `s` is sent; throws std::out_of_range if unknown.
  int slot_of(SymbolId s) const;

  std::vector<SymbolId> desired_by(int user) const;
  std::vector<SymbolId> sent_by(int user) const;
  const UserRole& role(int user) const;

  // Throws std::logic_error when a structural invariant is broken.
  void validate() const;

 private:
  Scenario scenario_;
  int users_;
  std::vector<SlotPlan> slots_;
  int phase1_len_;
  std::map<std::pair<int, int>, SymbolId> plan_;
  std::vector<SymbolId> symbols_;
  std::map<SymbolId, int> slot_of_;
  std::vector<UserRole> roles_;
};

// Two-pair two-way interference channel: 4 symbols in 3 slots.
Schedule schedule_twic();
// Two-pair two-way X channel: 8 symbols in 5 slots.
Schedule schedule_twxc();
// Neutralisation-only protocol for k1 users; throws InvalidUserCount if k1 < 3.
Schedule schedule_case1(int k1);
// Joint alignment/neutralisation protocol for k2 users; throws
// InvalidUserCount if k2 < 4.
Schedule schedule_case2(int k2);

// Cyclic successor k_j = ((k - 1 + j) mod k2) + 1.
int index_fn(int k, int j, int k2);

// Schedule for `scenario` on `users` users (ignored for twic/twxc, which are
// fixed at four).
Schedule make_schedule(Scenario scenario, int users);

}  // namespace stpnc

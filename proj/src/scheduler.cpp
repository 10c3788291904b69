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

#include "stpnc/scheduler.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "stpnc/errors.hpp"

namespace stpnc {

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::twic: return "twic";
    case Scenario::twxc: return "twxc";
    case Scenario::case1: return "case1";
    case Scenario::case2: return "case2";
  }
  return "?";
}

Scenario scenario_from_string(const std::string& name) {
  if (name == "twic") return Scenario::twic;
  if (name == "twxc") return Scenario::twxc;
  if (name == "case1") return Scenario::case1;
  if (name == "case2") return Scenario::case2;
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

std::string to_string(SymbolId id) {
  return "s" + std::to_string(id.dest) + "," + std::to_string(id.src);
}

Schedule::Schedule(Scenario scenario, int users, std::vector<SlotPlan> slots, int phase1_len)
    : scenario_(scenario), users_(users), slots_(std::move(slots)), phase1_len_(phase1_len) {
  if (phase1_len_ < 1 || phase1_len_ > static_cast<int>(slots_.size())) {
    throw std::invalid_argument("Schedule: bad phase-1 length");
  }
  for (int t = 1; t <= phase1_len_; ++t) {
    for (const Transmission& tx : slots_[static_cast<std::size_t>(t - 1)].transmissions) {
      plan_.emplace(std::make_pair(t, tx.sender), tx.symbol);
      symbols_.push_back(tx.symbol);
      slot_of_.emplace(tx.symbol, t);
    }
  }

  roles_.resize(static_cast<std::size_t>(users_));
  for (int t = 1; t <= phase1_len_; ++t) {
    const SlotPlan& sp = slot(t);
    for (const NodeId& d : sp.destinations) {
      if (d.kind != NodeId::Kind::user) continue;
      const bool wants = std::any_of(sp.transmissions.begin(), sp.transmissions.end(),
                                     [&](const Transmission& tx) { return tx.symbol.dest == d.user; });
      UserRole& r = roles_[static_cast<std::size_t>(d.user - 1)];
      if (wants) {
        r.direct_slots.push_back(t);
      } else if (r.aligned_slot) {
        throw std::logic_error("Schedule: user overhears more than one interference slot");
      } else {
        r.aligned_slot = t;
      }
    }
  }
}

const SlotPlan& Schedule::slot(int t) const {
  if (t < 1 || t > total_slots()) throw std::out_of_range("Schedule: slot out of range");
  return slots_[static_cast<std::size_t>(t - 1)];
}

std::vector<int> Schedule::phase2_slots() const {
  std::vector<int> out;
  for (int t = phase1_len_ + 1; t <= total_slots(); ++t) out.push_back(t);
  return out;
}

int Schedule::slot_of(SymbolId s) const {
  auto it = slot_of_.find(s);
  if (it == slot_of_.end()) throw std::out_of_range("Schedule: unknown symbol " + to_string(s));
  return it->second;
}

std::vector<SymbolId> Schedule::desired_by(int user) const {
  std::vector<SymbolId> out;
  for (const SymbolId& s : symbols_) {
    if (s.dest == user) out.push_back(s);
  }
  return out;
}

std::vector<SymbolId> Schedule::sent_by(int user) const {
  std::vector<SymbolId> out;
  for (const SymbolId& s : symbols_) {
    if (s.src == user) out.push_back(s);
  }
  return out;
}

const UserRole& Schedule::role(int user) const {
  if (user < 1 || user > users_) throw std::out_of_range("Schedule: user out of range");
  return roles_[static_cast<std::size_t>(user - 1)];
}

void Schedule::validate() const {
  std::set<SymbolId> seen;
  for (int t = 1; t <= total_slots(); ++t) {
    const SlotPlan& sp = slot(t);
    std::set<NodeId> src(sp.sources.begin(), sp.sources.end());
    for (const NodeId& d : sp.destinations) {
      if (src.count(d)) throw std::logic_error("Schedule: slot " + std::to_string(t) + " is not half-duplex");
    }
    const bool relay_sends = src.count(NodeId::relay_group()) > 0;
    if (is_phase1(t)) {
      if (relay_sends) throw std::logic_error("Schedule: relays transmit in phase 1");
      if (sp.transmissions.size() != sp.sources.size()) {
        throw std::logic_error("Schedule: phase-1 sources and transmissions disagree");
      }
      for (const Transmission& tx : sp.transmissions) {
        if (tx.symbol.src != tx.sender || tx.symbol.dest == tx.symbol.src) {
          throw std::logic_error("Schedule: malformed symbol " + to_string(tx.symbol));
        }
        if (!src.count(NodeId::of_user(tx.sender))) {
          throw std::logic_error("Schedule: transmitter not a source");
        }
        if (!seen.insert(tx.symbol).second) {
          throw std::logic_error("Schedule: symbol sent twice " + to_string(tx.symbol));
        }
      }
    } else {
      if (!relay_sends || src.size() != 1) throw std::logic_error("Schedule: phase-2 sources must be relays only");
      if (!sp.transmissions.empty()) throw std::logic_error("Schedule: users transmit in phase 2");
    }
  }
}

namespace {

SlotPlan user_slot(const std::vector<Transmission>& txs, const std::vector<int>& listeners) {
  SlotPlan sp;
  for (const Transmission& tx : txs) sp.sources.push_back(NodeId::of_user(tx.sender));
  for (int k : listeners) sp.destinations.push_back(NodeId::of_user(k));
  sp.destinations.push_back(NodeId::relay_group());
  sp.relay_listen = true;
  sp.transmissions = txs;
  return sp;
}

SlotPlan relay_slot(int users) {
  SlotPlan sp;
  sp.sources.push_back(NodeId::relay_group());
  for (int k = 1; k <= users; ++k) sp.destinations.push_back(NodeId::of_user(k));
  return sp;
}

Transmission tx(int dest, int src) { return {src, SymbolId{dest, src}}; }

}  // namespace

Schedule schedule_twic() {
  std::vector<SlotPlan> slots;
  slots.push_back(user_slot({tx(3, 1), tx(4, 2)}, {3, 4}));
  slots.push_back(user_slot({tx(1, 3), tx(2, 4)}, {1, 2}));
  slots.push_back(relay_slot(4));
  return Schedule(Scenario::twic, 4, std::move(slots), 2);
}

Schedule schedule_twxc() {
  std::vector<SlotPlan> slots;
  slots.push_back(user_slot({tx(3, 1), tx(3, 2)}, {3, 4}));
  slots.push_back(user_slot({tx(4, 1), tx(4, 2)}, {3, 4}));
  slots.push_back(user_slot({tx(1, 3), tx(1, 4)}, {1, 2}));
  slots.push_back(user_slot({tx(2, 3), tx(2, 4)}, {1, 2}));
  slots.push_back(relay_slot(4));
  return Schedule(Scenario::twxc, 4, std::move(slots), 4);
}

Schedule schedule_case1(int k1) {
  if (k1 < 3) throw InvalidUserCount("case1 needs at least 3 users, got " + std::to_string(k1));
  std::vector<SlotPlan> slots;
  for (int k = 1; k <= k1; ++k) {
    std::vector<Transmission> txs;
    for (int i = 1; i <= k1; ++i) {
      if (i != k) txs.push_back(tx(k, i));
    }
    slots.push_back(user_slot(txs, {k}));
  }
  for (int t = 0; t < k1 - 2; ++t) slots.push_back(relay_slot(k1));
  return Schedule(Scenario::case1, k1, std::move(slots), k1);
}

int index_fn(int k, int j, int k2) {
  if (k2 < 1 || k < 1 || k > k2 || j < 0) throw std::invalid_argument("index_fn: argument out of range");
  return ((k - 1 + j) % k2) + 1;
}

Schedule schedule_case2(int k2) {
  if (k2 < 4) throw InvalidUserCount("case2 needs at least 4 users, got " + std::to_string(k2));
  std::vector<SlotPlan> slots;
  for (int k = 1; k <= k2; ++k) {
    std::vector<Transmission> txs;
    for (int j = 2; j <= k2 - 1; ++j) txs.push_back(tx(k, index_fn(k, j, k2)));
    slots.push_back(user_slot(txs, {k, index_fn(k, 1, k2)}));
  }
  for (int t = 0; t < k2 - 3; ++t) slots.push_back(relay_slot(k2));
  return Schedule(Scenario::case2, k2, std::move(slots), k2);
}

Schedule make_schedule(Scenario scenario, int users) {
  switch (scenario) {
    case Scenario::twic: return schedule_twic();
    case Scenario::twxc: return schedule_twxc();
    case Scenario::case1: return schedule_case1(users);
    case Scenario::case2: return schedule_case2(users);
  }
  throw std::invalid_argument("make_schedule: unknown scenario");
}

}  // namespace stpnc

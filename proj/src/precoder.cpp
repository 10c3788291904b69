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

#include "stpnc/precoder.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "stpnc/errors.hpp"

namespace stpnc {
namespace {

void require_two_pair_setup(const ChannelSet& ch, int slots, const char* what) {
  const NetworkConfig& cfg = ch.config();
  if (cfg.users != 4 || cfg.relay_antennas != std::vector<int>{2}) {
    throw std::invalid_argument(std::string(what) + ": needs 4 users and one 2-antenna relay");
  }
  if (ch.slots() < slots) {
    throw std::invalid_argument(std::string(what) + ": channel set too short");
  }
}

void require_general_setup(const ChannelSet& ch, int users, int slots, const char* what) {
  if (ch.config().users < users) {
    throw std::invalid_argument(std::string(what) + ": channel set has too few users");
  }
  if (ch.slots() < slots) {
    throw std::invalid_argument(std::string(what) + ": channel set too short");
  }
}

// Stacked g rows across relays for (receiver j, transmitter i, blocks t,k).
CRowVector stacked_row(const ChannelSet& ch, int j, int t, int k, int i) {
  const NetworkConfig& cfg = ch.config();
  CRowVector row(cfg.sum_antenna_squares());
  Eigen::Index offset = 0;
  for (int relay = 0; relay < cfg.relays(); ++relay) {
    const CRowVector g = effective_channel(ch, j, relay, t, k, i);
    row.segment(offset, g.size()) = g;
    offset += g.size();
  }
  return row;
}

// Splits a stacked f into per-relay V^l = unvec(f^l).
std::vector<CMatrix> unstack(const CVector& f, const NetworkConfig& cfg) {
  std::vector<CMatrix> out;
  Eigen::Index offset = 0;
  for (int m : cfg.relay_antennas) {
    out.push_back(linalg::unvec(f.segment(offset, m * m), m, m));
    offset += m * m;
  }
  return out;
}

CVector first_null_vector(const CRowVector& row) {
  const CMatrix n = linalg::null_space(row);
  if (n.cols() == 0) throw SynthesisFailed("null space of a relay downlink row is empty");
  return n.col(0);
}

}  // namespace

CRowVector effective_channel(const ChannelSet& ch, int j, int relay, int t, int k, int i) {
  const CMatrix h_up = ch.user_relay(relay, i, k).transpose();
  const CMatrix h_down = ch.relay_user(j, relay, t);
  return linalg::kron(h_up, h_down);
}

PrecoderSet design_twic(const ChannelSet& ch) {
  require_two_pair_setup(ch, 3, "design_twic");
  constexpr int t = 3;
  PrecoderSet p;
  p.mode = PrecoderMode::per_symbol;
  // Each symbol is kept away from the one user that can neither subtract nor
  // resolve it.
  const std::pair<SymbolId, int> blocked[] = {
      {{3, 1}, 2}, {{1, 3}, 4}, {{2, 4}, 3}, {{4, 2}, 1}};
  for (const auto& [sym, victim] : blocked) {
    const CRowVector& h = ch.relay_user(victim, 0, t);
    const CVector v = first_null_vector(h);
    p.residual = std::max(p.residual, std::abs((h * v)(0)));
    p.per_symbol.emplace(std::make_pair(t, sym), v);
  }
  apply_power_normalization(p, ch, schedule_twic());
  return p;
}

PrecoderSet design_twxc(const ChannelSet& ch) {
  require_two_pair_setup(ch, 5, "design_twxc");
  constexpr int t = 5;
  const Schedule sched = schedule_twxc();
  PrecoderSet p;
  p.mode = PrecoderMode::per_symbol;
  for (const SymbolId& s : sched.symbols()) {
    // Users {1,2} and {3,4} form the two groups. The other sender in s.src's
    // group never learns s; the other member of s.dest's group overheard it.
    const bool src_low = s.src <= 2;
    const int victim = src_low ? 3 - s.src : 7 - s.src;
    const int listener = src_low ? 7 - s.dest : 3 - s.dest;
    const int k = sched.slot_of(s);
    CMatrix a(2, 2);
    a.row(0) = ch.relay_user(victim, 0, t);
    a.row(1) = ch.relay_user(listener, 0, t);
    CMatrix b(2, 1);
    b(0, 0) = 0.0;
    b(1, 0) = ch.user_user(listener, s.src, k);
    if (linalg::rank(a) < 2) {
      throw SynthesisFailed("design_twxc: singular downlink pair for " + to_string(s));
    }
    const CVector v = linalg::solve_least_norm(a, b);
    p.residual = std::max(p.residual, linalg::max_abs(a * v - b));
    p.per_symbol.emplace(std::make_pair(t, s), v);
  }
  apply_power_normalization(p, ch, sched);
  return p;
}

CMatrix build_stacked_constraints_case1(const ChannelSet& ch, int k1, int t, int k) {
  const int cols = ch.config().sum_antenna_squares();
  std::vector<CRowVector> rows;
  for (int i = 1; i <= k1; ++i) {
    if (i == k) continue;
    for (int j = 1; j <= k1; ++j) {
      if (j == i || j == k) continue;
      rows.push_back(stacked_row(ch, j, t, k, i));
    }
  }
  CMatrix a(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) a.row(static_cast<Eigen::Index>(r)) = rows[r];
  return a;
}

PrecoderSet design_case1(const ChannelSet& ch, int k1) {
  const Schedule sched = schedule_case1(k1);
  require_general_setup(ch, k1, sched.total_slots(), "design_case1");
  const auto deficit = [&](const std::string& detail) {
    return AntennaDeficit("case1 with " + std::to_string(k1) + " users needs sum M^2 >= " +
                          std::to_string((k1 - 1) * (k1 - 2) + 1) + ", have " +
                          std::to_string(ch.config().sum_antenna_squares()) + detail);
  };
  const std::vector<int> slots = sched.phase2_slots();
  PrecoderSet p;
  p.mode = PrecoderMode::per_block;
  std::map<int, std::vector<CVector>> stacked;
  for (int t : slots) {
    for (int k = 1; k <= k1; ++k) {
      const CMatrix a = build_stacked_constraints_case1(ch, k1, t, k);
      const CMatrix n = linalg::null_space(a);
      if (n.cols() == 0) throw deficit("");
      // Fixed unit-modulus weights pick a generic point of a wider null space.
      CVector w(n.cols());
      for (Eigen::Index c = 0; c < w.size(); ++c) w(c) = std::polar(1.0, 2.399963229728653 * static_cast<double>(c));
      CVector f = n * w;
      f /= f.norm();
      p.residual = std::max(p.residual, linalg::max_abs(a * f));
      p.per_block.emplace(std::make_pair(t, k), unstack(f, ch.config()));
      stacked[k].push_back(f);
    }
  }
  // User k resolves its k1-1 incoming symbols from its direct slot plus one
  // equation per phase-2 slot. A null vector that also cancels these leaves
  // the system short of rank, which the antenna count alone cannot rule out.
  for (int k = 1; k <= k1; ++k) {
    CMatrix d(static_cast<Eigen::Index>(slots.size()) + 1, k1 - 1);
    Eigen::Index col = 0;
    for (int i = 1; i <= k1; ++i) {
      if (i == k) continue;
      d(0, col) = ch.user_user(k, i, k);
      for (std::size_t r = 0; r < slots.size(); ++r) {
        d(static_cast<Eigen::Index>(r) + 1, col) = (stacked_row(ch, k, slots[r], k, i) * stacked[k][r])(0);
      }
      ++col;
    }
    if (linalg::rank(d) < k1 - 1) throw deficit(" (degenerate null space for user " + std::to_string(k) + ")");
  }
  apply_power_normalization(p, ch, sched);
  return p;
}

PrecoderSet design_case2(const ChannelSet& ch, int k2) {
  const Schedule sched = schedule_case2(k2);
  require_general_setup(ch, k2, sched.total_slots(), "design_case2");
  const int cols = ch.config().sum_antenna_squares();
  PrecoderSet p;
  p.mode = PrecoderMode::per_block;
  for (int t : sched.phase2_slots()) {
    for (int k = 1; k <= k2; ++k) {
      const int listener = index_fn(k, 1, k2);
      std::vector<CRowVector> rows;
      std::vector<cplx> rhs;
      for (int j = 2; j <= k2 - 1; ++j) {
        const int sender = index_fn(k, j, k2);
        for (int q = 1; q <= k2; ++q) {
          if (q == k || q == listener || q == sender) continue;
          rows.push_back(stacked_row(ch, q, t, k, sender));
          rhs.push_back(0.0);
        }
        rows.push_back(stacked_row(ch, listener, t, k, sender));
        rhs.push_back(ch.user_user(listener, sender, k));
      }
      CMatrix a(static_cast<Eigen::Index>(rows.size()), cols);
      CMatrix b(static_cast<Eigen::Index>(rows.size()), 1);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        a.row(static_cast<Eigen::Index>(r)) = rows[r];
        b(static_cast<Eigen::Index>(r), 0) = rhs[r];
      }
      CVector f;
      try {
        f = linalg::solve_least_norm(a, b);
      } catch (const InconsistentSystem&) {
        throw AntennaDeficit("case2 with " + std::to_string(k2) + " users needs sum M^2 >= " +
                             std::to_string((k2 - 2) * (k2 - 2)) + ", have " +
                             std::to_string(cols));
      }
      p.residual = std::max(p.residual, linalg::max_abs(a * f - b));
      p.per_block.emplace(std::make_pair(t, k), unstack(f, ch.config()));
    }
  }
  apply_power_normalization(p, ch, sched);
  return p;
}

PrecoderSet design_precoders(const Schedule& sched, const ChannelSet& ch) {
  switch (sched.scenario()) {
    case Scenario::twic: return design_twic(ch);
    case Scenario::twxc: return design_twxc(ch);
    case Scenario::case1: return design_case1(ch, sched.users());
    case Scenario::case2: return design_case2(ch, sched.users());
  }
  throw std::invalid_argument("design_precoders: unknown scenario");
}

cplx relay_path_coefficient(const PrecoderSet& p, const ChannelSet& ch, const Schedule& sched,
                            int j, int t, SymbolId s) {
  if (p.mode == PrecoderMode::per_symbol) {
    auto it = p.per_symbol.find({t, s});
    if (it == p.per_symbol.end()) return 0.0;
    return (ch.relay_user(j, 0, t) * it->second)(0);
  }
  const int k = sched.slot_of(s);
  auto it = p.per_block.find({t, k});
  if (it == p.per_block.end()) return 0.0;
  cplx c = 0.0;
  for (int relay = 0; relay < ch.config().relays(); ++relay) {
    const CMatrix& v = it->second[static_cast<std::size_t>(relay)];
    c += (ch.relay_user(j, relay, t) * v * ch.user_relay(relay, s.src, k))(0);
  }
  return c;
}

double verify_constraints(const PrecoderSet& p, const ChannelSet& ch, const Schedule& sched) {
  double worst = 0.0;
  for (int t : sched.phase2_slots()) {
    for (const SymbolId& s : sched.symbols()) {
      const int k = sched.slot_of(s);
      for (int j = 1; j <= sched.users(); ++j) {
        if (j == s.dest || j == s.src) continue;
        const UserRole& role = sched.role(j);
        if (std::find(role.direct_slots.begin(), role.direct_slots.end(), k) != role.direct_slots.end()) {
          continue;  // resolved by zero forcing at j
        }
        const cplx target = role.aligned_slot == k ? ch.user_user(j, s.src, k) : cplx{};
        const cplx c = relay_path_coefficient(p, ch, sched, j, t, s);
        worst = std::max(worst, std::abs(c - target));
      }
    }
  }
  return worst;
}

void apply_power_normalization(PrecoderSet& p, const ChannelSet& ch, const Schedule& sched) {
  const NetworkConfig& cfg = ch.config();
  // Relays forward phase-1 observations normalised by 1/sqrt(P), so their
  // noise has variance sigma^2 / P.
  const double fwd_noise = cfg.noise_var / cfg.power;
  for (int t : sched.phase2_slots()) {
    double energy = 0.0;
    if (p.mode == PrecoderMode::per_symbol) {
      for (const SymbolId& s : sched.symbols()) {
        auto it = p.per_symbol.find({t, s});
        if (it != p.per_symbol.end()) energy += it->second.squaredNorm();
      }
    } else {
      for (int k = 1; k <= sched.phase1_len(); ++k) {
        auto it = p.per_block.find({t, k});
        if (it == p.per_block.end()) continue;
        for (int relay = 0; relay < cfg.relays(); ++relay) {
          const CMatrix& v = it->second[static_cast<std::size_t>(relay)];
          for (const Transmission& tx : sched.slot(k).transmissions) {
            energy += (v * ch.user_relay(relay, tx.sender, k)).squaredNorm();
          }
          energy += fwd_noise * v.squaredNorm();
        }
      }
    }
    p.slot_gain[t] = energy > 0.0 ? std::sqrt(cfg.power / energy) : 0.0;
  }
}

}  // namespace stpnc

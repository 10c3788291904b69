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

#include "stpnc/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "stpnc/errors.hpp"

namespace stpnc {
namespace {

bool contains(const std::vector<int>& v, int x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

double max_abs_value(const CoeffMap& m) {
  double worst = 0.0;
  for (const auto& [s, c] : m) worst = std::max(worst, std::abs(c));
  return worst;
}

// Re-encodes relay `relay`'s observation of slot k from decoded symbols.
CVector reencode(const RelayObservation& obs, const CoeffMap& symbols) {
  CVector y = CVector::Zero(obs.observed.size());
  for (const auto& [s, h] : obs.coeffs) y += h * symbols.at(s);
  return y;
}

}  // namespace

SymbolVector draw_symbols(const Schedule& sched, Seed seed) {
  CnSource src(seed);
  SymbolVector out;
  for (const SymbolId& s : sched.symbols()) out.values[s] = src();
  return out;
}

CoeffMap own_symbols(const Schedule& sched, const SymbolVector& syms, int user) {
  CoeffMap out;
  for (const SymbolId& s : sched.sent_by(user)) out[s] = syms.values.at(s);
  return out;
}

const Equation* EquationLedger::find(int user, int slot) const {
  auto it = users.find(user);
  if (it == users.end()) return nullptr;
  for (const Equation& e : it->second) {
    if (e.slot == slot) return &e;
  }
  return nullptr;
}

const RelayObservation* EquationLedger::find_relay(int relay, int slot) const {
  for (const RelayObservation& r : relays) {
    if (r.relay == relay && r.slot == slot) return &r;
  }
  return nullptr;
}

std::string to_string(RelayMode m) {
  return m == RelayMode::decode_forward ? "decode_forward" : "linear_forward";
}

EquationLedger run_phase1(const Schedule& sched, const ChannelSet& ch, const SymbolVector& syms,
                          double noise_var, Seed seed) {
  const NetworkConfig& cfg = ch.config();
  if (ch.slots() < sched.total_slots() || cfg.users < sched.users()) {
    throw std::invalid_argument("run_phase1: channel set does not cover the schedule");
  }
  const double stored_noise = noise_var / cfg.power;
  CnSource noise(seed);
  EquationLedger ledger;
  for (int t = 1; t <= sched.phase1_len(); ++t) {
    const SlotPlan& sp = sched.slot(t);
    for (const NodeId& d : sp.destinations) {
      if (d.kind != NodeId::Kind::user) continue;
      Equation e;
      e.slot = t;
      for (const Transmission& tx : sp.transmissions) {
        const cplx h = ch.user_user(d.user, tx.sender, t);
        e.coeffs[tx.symbol] = h;
        e.observed += h * syms.values.at(tx.symbol);
      }
      if (stored_noise > 0.0) e.observed += noise(stored_noise);
      ledger.users[d.user].push_back(std::move(e));
    }
    if (!sp.relay_listen) continue;
    for (int relay = 0; relay < cfg.relays(); ++relay) {
      RelayObservation obs;
      obs.slot = t;
      obs.relay = relay;
      obs.observed = CVector::Zero(cfg.relay_antennas[static_cast<std::size_t>(relay)]);
      for (const Transmission& tx : sp.transmissions) {
        const CVector& h = ch.user_relay(relay, tx.sender, t);
        obs.coeffs[tx.symbol] = h;
        obs.observed += h * syms.values.at(tx.symbol);
      }
      if (stored_noise > 0.0) {
        for (Eigen::Index a = 0; a < obs.observed.size(); ++a) obs.observed(a) += noise(stored_noise);
      }
      ledger.relays.push_back(std::move(obs));
    }
  }
  return ledger;
}

RelayTransmitPlan relay_process(const EquationLedger& ledger, const PrecoderSet& p,
                                const Schedule& sched, const ChannelSet& ch, RelayMode mode,
                                const linalg::Tolerance& tol) {
  const NetworkConfig& cfg = ch.config();
  RelayTransmitPlan plan;
  plan.mode = mode;

  if (mode == RelayMode::linear_forward && p.mode != PrecoderMode::per_block) {
    throw std::invalid_argument("relay_process: linear forwarding needs per-block precoders");
  }
  if (p.mode == PrecoderMode::per_symbol && cfg.relays() != 1) {
    throw std::invalid_argument("relay_process: per-symbol precoders need a single relay");
  }

  // decoded[relay] holds that relay's own symbol estimates.
  std::vector<CoeffMap> decoded(static_cast<std::size_t>(cfg.relays()));
  if (mode == RelayMode::decode_forward) {
    for (const RelayObservation& obs : ledger.relays) {
      std::vector<SymbolId> cols;
      for (const auto& [s, h] : obs.coeffs) cols.push_back(s);
      if (cols.empty()) continue;
      CMatrix h(obs.observed.size(), static_cast<Eigen::Index>(cols.size()));
      for (std::size_t c = 0; c < cols.size(); ++c) h.col(static_cast<Eigen::Index>(c)) = obs.coeffs.at(cols[c]);
      const CMatrix s_hat = linalg::zf_solve(h, obs.observed, tol);
      for (std::size_t c = 0; c < cols.size(); ++c) {
        decoded[static_cast<std::size_t>(obs.relay)][cols[c]] = s_hat(static_cast<Eigen::Index>(c), 0);
      }
    }
    plan.decoded = decoded.front();
  }

  for (int t : sched.phase2_slots()) {
    auto g_it = p.slot_gain.find(t);
    const double gain = g_it == p.slot_gain.end() ? 0.0 : g_it->second;
    plan.gain[t] = gain;
    std::vector<CVector> x;
    for (int relay = 0; relay < cfg.relays(); ++relay) {
      const int m = cfg.relay_antennas[static_cast<std::size_t>(relay)];
      CVector xr = CVector::Zero(m);
      if (p.mode == PrecoderMode::per_symbol) {
        for (const auto& [s, v] : decoded[static_cast<std::size_t>(relay)]) {
          auto it = p.per_symbol.find({t, s});
          if (it != p.per_symbol.end()) xr += it->second * v;
        }
      } else {
        for (int k = 1; k <= sched.phase1_len(); ++k) {
          auto it = p.per_block.find({t, k});
          const RelayObservation* obs = ledger.find_relay(relay, k);
          if (it == p.per_block.end() || obs == nullptr) continue;
          const CVector y = mode == RelayMode::linear_forward
                                ? obs->observed
                                : reencode(*obs, decoded[static_cast<std::size_t>(relay)]);
          xr += it->second[static_cast<std::size_t>(relay)] * y;
        }
      }
      x.push_back(gain * xr);
    }
    plan.transmit[t] = std::move(x);
  }
  return plan;
}

EquationLedger run_phase2(EquationLedger ledger, const RelayTransmitPlan& plan,
                          const PrecoderSet& p, const Schedule& sched, const ChannelSet& ch,
                          double noise_var, Seed seed) {
  const NetworkConfig& cfg = ch.config();
  CnSource noise(seed);
  for (int t : sched.phase2_slots()) {
    const auto tx_it = plan.transmit.find(t);
    const auto g_it = plan.gain.find(t);
    const double gain = g_it == plan.gain.end() ? 0.0 : g_it->second;
    for (const NodeId& d : sched.slot(t).destinations) {
      if (d.kind != NodeId::Kind::user) continue;
      const int j = d.user;
      cplx received = 0.0;
      if (tx_it != plan.transmit.end()) {
        for (int relay = 0; relay < cfg.relays(); ++relay) {
          received += (ch.relay_user(j, relay, t) * tx_it->second[static_cast<std::size_t>(relay)])(0);
        }
      }
      if (noise_var > 0.0) received += noise(noise_var);

      Equation e;
      e.slot = t;
      e.observed = gain > 0.0 ? received / gain : received;
      const UserRole& role = sched.role(j);
      for (const SymbolId& s : sched.symbols()) {
        const cplx c = relay_path_coefficient(p, ch, sched, j, t, s);
        e.coeffs[s] = c;
        const int k = sched.slot_of(s);
        if (s.dest == j) {
          e.desired[s] = c;
        } else if (s.src == j) {
          e.self_interference[s] = c;
        } else if (role.aligned_slot == k) {
          e.overheard_interference[s] = c;
        } else if (contains(role.direct_slots, k)) {
          e.resolvable_interference[s] = c;
        } else {
          e.leakage[s] = c;
        }
      }
      ledger.users[j].push_back(std::move(e));
    }
  }
  return ledger;
}

DecodeResult decode_user(int user, const EquationLedger& ledger, const Schedule& sched,
                         const CoeffMap& own, const linalg::Tolerance& tol) {
  const UserRole& role = sched.role(user);
  DecodeResult out;

  std::vector<const Equation*> direct;
  for (int t : role.direct_slots) {
    const Equation* e = ledger.find(user, t);
    if (e == nullptr) throw std::invalid_argument("decode_user: missing phase-1 equation");
    direct.push_back(e);
  }
  const Equation* aligned = nullptr;
  if (role.aligned_slot) {
    aligned = ledger.find(user, *role.aligned_slot);
    if (aligned == nullptr) throw std::invalid_argument("decode_user: missing overheard equation");
  }

  std::set<SymbolId> unknown_set;
  for (const Equation* e : direct) {
    for (const auto& [s, c] : e->coeffs) {
      if (!own.count(s)) unknown_set.insert(s);
    }
  }
  out.unknowns.assign(unknown_set.begin(), unknown_set.end());

  std::vector<int> relay_slots = sched.phase2_slots();
  const auto rows = static_cast<Eigen::Index>(direct.size() + relay_slots.size());
  const auto cols = static_cast<Eigen::Index>(out.unknowns.size());
  out.effective = CMatrix::Zero(rows, cols);
  out.rhs = CVector::Zero(rows);

  Eigen::Index r = 0;
  for (const Equation* e : direct) {
    cplx value = e->observed;
    for (Eigen::Index c = 0; c < cols; ++c) {
      auto it = e->coeffs.find(out.unknowns[static_cast<std::size_t>(c)]);
      if (it != e->coeffs.end()) out.effective(r, c) = it->second;
    }
    out.rhs(r++) = value;
  }

  for (int t : relay_slots) {
    const Equation* e = ledger.find(user, t);
    if (e == nullptr) throw std::invalid_argument("decode_user: missing phase-2 equation");
    cplx value = e->observed;
    CoeffMap remaining = e->coeffs;
    // Self-interference: own symbols with the effective relay channel.
    for (const auto& [s, v] : own) {
      auto it = remaining.find(s);
      if (it == remaining.end()) continue;
      value -= it->second * v;
      it->second -= it->second;
      out.self_residual = std::max(out.self_residual, std::abs(it->second));
      remaining.erase(it);
    }
    // Overheard interference: the relays replay the stored equation.
    if (aligned != nullptr) {
      value -= aligned->observed;
      for (const auto& [s, c] : aligned->coeffs) {
        auto it = remaining.find(s);
        const cplx relayed = it == remaining.end() ? cplx{} : it->second;
        out.alignment_residual = std::max(out.alignment_residual, std::abs(relayed - c));
        if (it != remaining.end()) remaining.erase(it);
      }
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      auto it = remaining.find(out.unknowns[static_cast<std::size_t>(c)]);
      if (it != remaining.end()) {
        out.effective(r, c) = it->second;
        remaining.erase(it);
      }
    }
    out.leakage = std::max(out.leakage, max_abs_value(remaining));
    out.rhs(r++) = value;
  }

  if (cols == 0) return out;
  out.rank = linalg::rank(out.effective, tol);
  const CMatrix s_hat = linalg::zf_solve(out.effective, out.rhs, tol);
  for (Eigen::Index c = 0; c < cols; ++c) {
    out.recovered[out.unknowns[static_cast<std::size_t>(c)]] = s_hat(c, 0);
  }
  return out;
}

double ledger_linearity_residual(const EquationLedger& ledger, const SymbolVector& syms) {
  double worst = 0.0;
  for (const auto& [user, eqs] : ledger.users) {
    for (const Equation& e : eqs) {
      cplx sum = 0.0;
      for (const auto& [s, c] : e.coeffs) sum += c * syms.values.at(s);
      worst = std::max(worst, std::abs(e.observed - sum));
    }
  }
  for (const RelayObservation& obs : ledger.relays) {
    CVector sum = CVector::Zero(obs.observed.size());
    for (const auto& [s, h] : obs.coeffs) sum += h * syms.values.at(s);
    worst = std::max(worst, linalg::max_abs(obs.observed - sum));
  }
  return worst;
}

double alignment_identity_residual(const EquationLedger& ledger, const Schedule& sched,
                                   const SymbolVector& syms) {
  double worst = 0.0;
  for (int user = 1; user <= sched.users(); ++user) {
    const UserRole& role = sched.role(user);
    if (!role.aligned_slot) continue;
    const Equation* y_m = ledger.find(user, *role.aligned_slot);
    if (y_m == nullptr) continue;
    for (int t : sched.phase2_slots()) {
      const Equation* e = ledger.find(user, t);
      if (e == nullptr) continue;
      cplx l_oi = 0.0;
      for (const auto& [s, c] : e->overheard_interference) l_oi += c * syms.values.at(s);
      worst = std::max(worst, std::abs(l_oi - y_m->observed));
      for (const auto& [s, c] : y_m->coeffs) {
        auto it = e->overheard_interference.find(s);
        const cplx relayed = it == e->overheard_interference.end() ? cplx{} : it->second;
        worst = std::max(worst, std::abs(relayed - c));
      }
    }
  }
  return worst;
}

RelayMode default_relay_mode(Scenario s) {
  return s == Scenario::twic || s == Scenario::twxc ? RelayMode::decode_forward
                                                     : RelayMode::linear_forward;
}

SimReport run_end_to_end(Scenario scenario, const NetworkConfig& cfg, Seed seed,
                         std::optional<RelayMode> mode, const linalg::Tolerance& tol) {
  cfg.validate();
  const Schedule sched = make_schedule(scenario, cfg.users);
  if (cfg.users != sched.users()) {
    throw std::invalid_argument("run_end_to_end: " + to_string(scenario) + " needs " +
                                std::to_string(sched.users()) + " users");
  }
  const ChannelSet ch = draw_channels(cfg, sched.total_slots(), derive_trial_seed(seed, 0));
  const PrecoderSet p = design_precoders(sched, ch);
  const SymbolVector syms = draw_symbols(sched, derive_trial_seed(seed, 1));

  SimReport rep;
  rep.scenario = scenario;
  rep.users = sched.users();
  rep.seed = seed.root;
  rep.relay_mode = mode.value_or(default_relay_mode(scenario));

  EquationLedger ledger = run_phase1(sched, ch, syms, cfg.noise_var, derive_trial_seed(seed, 2));
  const RelayTransmitPlan plan = relay_process(ledger, p, sched, ch, rep.relay_mode, tol);
  ledger = run_phase2(std::move(ledger), plan, p, sched, ch, cfg.noise_var, derive_trial_seed(seed, 3));

  double power = 0.0;
  for (const auto& [s, v] : syms.values) power += std::norm(v);
  const double rms = std::sqrt(power / static_cast<double>(syms.values.size()));

  for (int user = 1; user <= sched.users(); ++user) {
    const DecodeResult d = decode_user(user, ledger, sched, own_symbols(sched, syms, user), tol);
    rep.effective_ranks[user] = d.rank;
    rep.self_residual = std::max(rep.self_residual, d.self_residual);
    rep.leakage_residual = std::max(rep.leakage_residual, d.leakage);
    rep.alignment_residual = std::max(rep.alignment_residual, d.alignment_residual);
    for (const SymbolId& s : sched.desired_by(user)) {
      const cplx s_hat = d.recovered.at(s);
      rep.recovered[s] = s_hat;
      rep.max_symbol_error = std::max(rep.max_symbol_error, std::abs(s_hat - syms.values.at(s)) / rms);
      ++rep.symbols_delivered;
    }
  }
  rep.slots_used = sched.total_slots();
  rep.achieved_dof = Rational(rep.symbols_delivered, rep.slots_used);
  rep.constraint_residual = verify_constraints(p, ch, sched);
  if (cfg.noise_var == 0.0) {
    rep.ledger_residual = ledger_linearity_residual(ledger, syms);
    rep.alignment_residual =
        std::max(rep.alignment_residual, alignment_identity_residual(ledger, sched, syms));
  }
  return rep;
}

}  // namespace stpnc

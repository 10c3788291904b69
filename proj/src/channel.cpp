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

#include "stpnc/channel.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace stpnc {

void NetworkConfig::validate() const {
  if (users < 2) throw std::invalid_argument("NetworkConfig: need at least 2 users");
  if (relay_antennas.empty()) throw std::invalid_argument("NetworkConfig: need at least one relay");
  for (int m : relay_antennas) {
    if (m < 1) throw std::invalid_argument("NetworkConfig: relay antenna count must be >= 1");
  }
  if (!(power > 0.0) || !std::isfinite(power)) {
    throw std::invalid_argument("NetworkConfig: power must be positive");
  }
  if (!(noise_var >= 0.0) || !std::isfinite(noise_var)) {
    throw std::invalid_argument("NetworkConfig: noise variance must be non-negative");
  }
}

int NetworkConfig::total_antennas() const {
  return std::accumulate(relay_antennas.begin(), relay_antennas.end(), 0);
}

int NetworkConfig::sum_antenna_squares() const {
  int s = 0;
  for (int m : relay_antennas) s += m * m;
  return s;
}

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Seed derive_trial_seed(Seed seed, std::uint64_t trial) {
  // The affine step is a bijection in `trial` (odd multiplier) and mix64 is a
  // bijection, so distinct trials give distinct seeds.
  return Seed{mix64(seed.root + (trial + 1) * 0x9e3779b97f4a7c15ULL)};
}

CnSource::CnSource(Seed seed) : engine_(mix64(seed.root ^ 0x5851f42d4c957f2dULL)) {}

cplx CnSource::operator()(double variance) {
  const double s = std::sqrt(variance / 2.0);
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {s * re, s * im};
}

ChannelSet::ChannelSet(NetworkConfig cfg, int slots) : cfg_(std::move(cfg)), slots_(slots) {
  cfg_.validate();
  if (slots < 1) throw std::invalid_argument("ChannelSet: slots must be >= 1");
  const auto k = static_cast<std::size_t>(cfg_.users);
  const auto l = static_cast<std::size_t>(cfg_.relays());
  const auto n = static_cast<std::size_t>(slots);
  uu_.assign(k * k * n, cplx{});
  ur_.resize(l * k * n);
  ru_.resize(k * l * n);
  for (int t = 1; t <= slots; ++t) {
    for (int relay = 0; relay < cfg_.relays(); ++relay) {
      const int m = cfg_.relay_antennas[static_cast<std::size_t>(relay)];
      for (int u = 1; u <= cfg_.users; ++u) {
        ur_[ur_index(relay, u, t)] = CVector::Zero(m);
        ru_[ru_index(u, relay, t)] = CRowVector::Zero(m);
      }
    }
  }
}

std::size_t ChannelSet::uu_index(int k, int i, int t) const {
  if (k < 1 || k > cfg_.users || i < 1 || i > cfg_.users || t < 1 || t > slots_) {
    throw std::out_of_range("ChannelSet: user/slot index out of range");
  }
  const auto users = static_cast<std::size_t>(cfg_.users);
  return (static_cast<std::size_t>(t - 1) * users + static_cast<std::size_t>(k - 1)) * users +
         static_cast<std::size_t>(i - 1);
}

std::size_t ChannelSet::ur_index(int relay, int i, int t) const {
  if (relay < 0 || relay >= cfg_.relays() || i < 1 || i > cfg_.users || t < 1 || t > slots_) {
    throw std::out_of_range("ChannelSet: relay/user/slot index out of range");
  }
  const auto users = static_cast<std::size_t>(cfg_.users);
  const auto relays = static_cast<std::size_t>(cfg_.relays());
  return (static_cast<std::size_t>(t - 1) * relays + static_cast<std::size_t>(relay)) * users +
         static_cast<std::size_t>(i - 1);
}

std::size_t ChannelSet::ru_index(int k, int relay, int t) const {
  return ur_index(relay, k, t);
}

cplx ChannelSet::user_user(int k, int i, int t) const { return uu_[uu_index(k, i, t)]; }
cplx& ChannelSet::user_user(int k, int i, int t) { return uu_[uu_index(k, i, t)]; }

const CVector& ChannelSet::user_relay(int relay, int i, int t) const {
  return ur_[ur_index(relay, i, t)];
}
CVector& ChannelSet::user_relay(int relay, int i, int t) { return ur_[ur_index(relay, i, t)]; }

const CRowVector& ChannelSet::relay_user(int k, int relay, int t) const {
  return ru_[ru_index(k, relay, t)];
}
CRowVector& ChannelSet::relay_user(int k, int relay, int t) { return ru_[ru_index(k, relay, t)]; }

bool operator==(const ChannelSet& a, const ChannelSet& b) {
  if (a.slots_ != b.slots_ || a.cfg_.users != b.cfg_.users ||
      a.cfg_.relay_antennas != b.cfg_.relay_antennas) {
    return false;
  }
  if (a.uu_ != b.uu_) return false;
  for (std::size_t i = 0; i < a.ur_.size(); ++i) {
    if (a.ur_[i] != b.ur_[i] || a.ru_[i] != b.ru_[i]) return false;
  }
  return true;
}

namespace {

cplx nonzero_draw(CnSource& src) {
  cplx h = src();
  while (h == cplx{}) h = src();
  return h;
}

}  // namespace

ChannelSet draw_channels(const NetworkConfig& cfg, int slots, Seed seed) {
  ChannelSet ch(cfg, slots);
  for (int t = 1; t <= slots; ++t) {
    CnSource src(Seed{mix64(seed.root ^ mix64(static_cast<std::uint64_t>(t)))});
    for (int k = 1; k <= cfg.users; ++k) {
      for (int i = 1; i <= cfg.users; ++i) ch.user_user(k, i, t) = nonzero_draw(src);
    }
    for (int relay = 0; relay < cfg.relays(); ++relay) {
      for (int i = 1; i <= cfg.users; ++i) {
        CVector& h = ch.user_relay(relay, i, t);
        for (Eigen::Index a = 0; a < h.size(); ++a) h(a) = nonzero_draw(src);
      }
      for (int k = 1; k <= cfg.users; ++k) {
        CRowVector& h = ch.relay_user(k, relay, t);
        for (Eigen::Index a = 0; a < h.size(); ++a) h(a) = nonzero_draw(src);
      }
    }
  }
  return ch;
}

}  // namespace stpnc

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
#include <random>
#include <vector>

#include "stpnc/linalg.hpp"

namespace stpnc {

// Users are numbered 1..K and time slots 1..n, matching how protocols are
// usually written down. Relays are addressed by their 0-based position in
// relay_antennas.
struct NetworkConfig {
  int users = 4;
  std::vector<int> relay_antennas{2};
  double power = 1.0;      // per-node transmit power P
  double noise_var = 0.0;  // sigma^2; 0 selects the noiseless model

  // Throws std::invalid_argument on K < 2, no relays, M < 1, P <= 0 or
  // sigma^2 < 0.
  void validate() const;

  int relays() const { return static_cast<int>(relay_antennas.size()); }
  int total_antennas() const;
  // sum over relays of M_l^2, the dimension of the stacked precoder vector.
  int sum_antenna_squares() const;
};

struct Seed {
  std::uint64_t root = 0;
  friend bool operator==(Seed, Seed) = default;
};

// Counter-based child seed; injective in `trial` for a fixed parent.
Seed derive_trial_seed(Seed seed, std::uint64_t trial);

// splitmix64 finaliser, exposed for deterministic stream construction.
std::uint64_t mix64(std::uint64_t x);

// Stream of circularly-symmetric complex Gaussian samples.
class CnSource {
 public:
  explicit CnSource(Seed seed);
  // Zero-mean sample with E|x|^2 = variance; real and imaginary parts each
  // carry variance/2.
  cplx operator()(double variance = 1.0);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// All channel coefficients of one network realisation. The non-const
// accessors exist for hand-built channels; drawn sets are treated as frozen.
class ChannelSet {
 public:
  ChannelSet(NetworkConfig cfg, int slots);

  const NetworkConfig& config() const { return cfg_; }
  int slots() const { return slots_; }

  // h_{k,i}[t]: user i -> user k (k == i is stored but never used).
  cplx user_user(int k, int i, int t) const;
  // h^l_{R,i}[t]: user i -> relay l, length M_l column.
  const CVector& user_relay(int relay, int i, int t) const;
  // h^l_{k,R}[t]^*: relay l -> user k, length M_l row.
  const CRowVector& relay_user(int k, int relay, int t) const;

  cplx& user_user(int k, int i, int t);
  CVector& user_relay(int relay, int i, int t);
  CRowVector& relay_user(int k, int relay, int t);

  friend bool operator==(const ChannelSet& a, const ChannelSet& b);

 private:
  std::size_t uu_index(int k, int i, int t) const;
  std::size_t ur_index(int relay, int i, int t) const;
  std::size_t ru_index(int k, int relay, int t) const;

  NetworkConfig cfg_;
  int slots_;
  std::vector<cplx> uu_;
  std::vector<CVector> ur_;
  std::vector<CRowVector> ru_;
};

// Draws every coefficient IID CN(0,1). Slot t uses its own stream derived
// from (seed, t), so a longer draw extends a shorter one with the same seed.
ChannelSet draw_channels(const NetworkConfig& cfg, int slots, Seed seed);

}  // namespace stpnc

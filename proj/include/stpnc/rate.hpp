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

#include <optional>
#include <ostream>
#include <vector>

#include "stpnc/channel.hpp"
#include "stpnc/precoder.hpp"

namespace stpnc::rate {

// Finite-SNR evaluation of the two-pair interference channel. Transmit power
// is fixed at P = 1; each grid point sets sigma^2 = 10^(-snr_db / 10).
struct RateConfig {
  std::vector<double> snr_db_list;
  int trials = 10000;
  Seed seed{};
  unsigned jobs = 0;  // 0 = hardware concurrency
  // Throws std::invalid_argument on an empty grid or trials < 1.
  void validate() const;
};

struct Estimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};

struct RatePoint {
  double snr_db = 0.0;
  Estimate stpnc;
  Estimate tdma;
};

struct RateResult {
  std::vector<RatePoint> points;
  // First upward crossing of ST-PNC over TDMA, linearly interpolated.
  std::optional<double> crossover_db;
};

// Relay-side ZF rate of s13 in slot 2: the combiner is the unit vector
// orthogonal to h_{R,4}[2].
double uplink_rate(const ChannelSet& ch, double power, double noise_var);

// Squared norm of the stacked effective channel of s13 at user 1,
// [h_{1,3}[2]; h_{1,R}^*[3] v_{1,3}[3]], with unit-norm relay beams.
double downlink_gain(const ChannelSet& ch, const PrecoderSet& p);

// log2(1 + P / (2.5 sigma^2) * ||h~13||^2).
double downlink_rate(const ChannelSet& ch, const PrecoderSet& p, double power, double noise_var);

double df_pair_rate(const ChannelSet& ch, const PrecoderSet& p, double power, double noise_var);

// 4/3 times the ergodic decode-and-forward rate of s13.
Estimate stpnc_sum_rate(double snr_db, int trials, Seed seed, unsigned jobs = 0);

// Ergodic rate of a single direct link, log2(1 + rho |h|^2).
Estimate tdma_sum_rate(double snr_db, int trials, Seed seed, unsigned jobs = 0);

// Both curves over the grid. Trial i uses the same channel draw at every
// grid point.
RateResult snr_sweep(const RateConfig& cfg);

// Least-squares slope of mean rate versus snr_db, ST-PNC over TDMA, on the
// points with lo <= snr_db <= hi. Throws std::invalid_argument with fewer than
// two such points.
double slope_ratio(const RateResult& r, double lo, double hi);

// Header snr_db,stpnc_rate,stpnc_stderr,tdma_rate,tdma_stderr.
void write_csv(std::ostream& os, const RateResult& r);

}  // namespace stpnc::rate

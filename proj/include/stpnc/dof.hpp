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
#include <ostream>
#include <vector>

#include "stpnc/rational.hpp"

namespace stpnc::dof {

struct KStars {
  std::int64_t k1 = 0;
  std::int64_t k2 = 0;
  std::int64_t k3 = 0;
  friend bool operator==(const KStars&, const KStars&) = default;
};

struct DoFResult {
  KStars stars;
  Rational term_in{0};     // neutralisation only
  Rational term_in_ia{0};  // alignment plus neutralisation
  Rational term_ia{0};     // relay-aided alignment
  Rational gof{0};
  Rational cap{0};
  Rational value{0};
  bool optimal = false;
};

// Largest r with r*r <= n.
std::int64_t isqrt(std::int64_t n);

std::int64_t sum_antenna_squares(const std::vector<int>& antennas);

// Throws std::invalid_argument on an empty list or M < 1.
KStars k_stars(const std::vector<int>& antennas);

// Inner bound min{K/2, max(term_in, term_in_ia, term_ia)}; each K_i is
// clamped to K before its term is evaluated. Throws std::invalid_argument for
// K < 3.
DoFResult sum_dof(int users, const std::vector<int>& antennas);

// min(K, floor(sqrt(sum M^2) + 1)) / 2. Throws std::invalid_argument for K < 2.
Rational gof_dof(int users, const std::vector<int>& antennas);

// Single relay with m1 antennas.
Rational corollary3(int users, int m1);

struct SweepRow {
  int relays = 0;
  DoFResult result;
};

// L = 1..l_max single-antenna relays.
std::vector<SweepRow> sweep_fig4(int users, int l_max);

// Header L,term_in,term_in_ia,term_ia,gof,stpnc_value,stpnc_value_exact.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace stpnc::dof

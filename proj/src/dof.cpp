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

#include "stpnc/dof.hpp"

#include <algorithm>
#include <stdexcept>

namespace stpnc::dof {

std::int64_t isqrt(std::int64_t n) {
  if (n < 0) throw std::invalid_argument("isqrt: negative argument");
  std::int64_t r = 0;
  std::int64_t bit = std::int64_t{1} << 62;
  while (bit > n) bit >>= 2;
  while (bit != 0) {
    if (n >= r + bit) {
      n -= r + bit;
      r = (r >> 1) + bit;
    } else {
      r >>= 1;
    }
    bit >>= 2;
  }
  return r;
}

std::int64_t sum_antenna_squares(const std::vector<int>& antennas) {
  if (antennas.empty()) throw std::invalid_argument("dof: at least one relay is required");
  std::int64_t s = 0;
  for (int m : antennas) {
    if (m < 1) throw std::invalid_argument("dof: relay antenna count must be >= 1");
    s += std::int64_t{m} * m;
  }
  return s;
}

KStars k_stars(const std::vector<int>& antennas) {
  const std::int64_t n = sum_antenna_squares(antennas);
  // floor(sqrt(n - 3/4) + 3/2) = floor((sqrt(4n - 3) + 3) / 2)
  return {(isqrt(4 * n - 3) + 3) / 2, isqrt(n) + 2, isqrt(n) + 1};
}

DoFResult sum_dof(int users, const std::vector<int>& antennas) {
  if (users < 3) throw std::invalid_argument("sum_dof: needs K >= 3");
  const std::int64_t k = users;
  const std::int64_t n = sum_antenna_squares(antennas);
  DoFResult r;
  r.stars = k_stars(antennas);
  const std::int64_t k1 = std::min(r.stars.k1, k);
  const std::int64_t k2 = std::min(r.stars.k2, k);
  const std::int64_t k3 = std::min(r.stars.k3, k);
  r.term_in = Rational(k1, 2);
  r.term_in_ia = Rational(k2 * (k2 - 2), 2 * k2 - 3);
  r.term_ia = Rational(k3 * k3, 2 * k3 - 1);
  r.gof = gof_dof(users, antennas);
  r.cap = Rational(k, 2);
  r.value = std::min(r.cap, std::max({r.term_in, r.term_in_ia, r.term_ia}));
  r.optimal = n >= (k - 1) * (k - 2) + 1;
  return r;
}

Rational gof_dof(int users, const std::vector<int>& antennas) {
  if (users < 2) throw std::invalid_argument("gof_dof: needs K >= 2");
  const std::int64_t n = sum_antenna_squares(antennas);
  return Rational(std::min<std::int64_t>(users, isqrt(n) + 1), 2);
}

Rational corollary3(int users, int m1) {
  if (m1 < 1) throw std::invalid_argument("corollary3: needs m1 >= 1");
  return sum_dof(users, {m1}).value;
}

std::vector<SweepRow> sweep_fig4(int users, int l_max) {
  std::vector<SweepRow> rows;
  for (int l = 1; l <= l_max; ++l) {
    rows.push_back({l, sum_dof(users, std::vector<int>(static_cast<std::size_t>(l), 1))});
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "L,term_in,term_in_ia,term_ia,gof,stpnc_value,stpnc_value_exact\n";
  for (const SweepRow& row : rows) {
    const DoFResult& r = row.result;
    os << row.relays << ',' << to_decimal(r.term_in) << ',' << to_decimal(r.term_in_ia) << ','
       << to_decimal(r.term_ia) << ',' << to_decimal(r.gof) << ',' << to_decimal(r.value) << ','
       << to_string(r.value) << '\n';
  }
}

}  // namespace stpnc::dof

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
#include <string>

#include <boost/rational.hpp>

namespace stpnc {

using Rational = boost::rational<std::int64_t>;

// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& r);

// Decimal rendering with `digits` significant digits.
std::string to_decimal(const Rational& r, int digits = 6);

inline double to_double(const Rational& r) {
  return boost::rational_cast<double>(r);
}

}  // namespace stpnc

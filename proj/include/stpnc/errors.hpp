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

#include <stdexcept>
#include <string>

namespace stpnc {

// Base of every error the library raises on a well-formed but unsatisfiable
// request. Precondition violations by the caller use std::invalid_argument.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Linear system has no solution within the residual threshold.
class InconsistentSystem : public Error {
 public:
  using Error::Error;
};

// Decoding matrix lost column rank.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

// A probability-zero channel realisation left a precoder undefined.
class SynthesisFailed : public Error {
 public:
  using Error::Error;
};

// Relays do not have enough antennas for the requested sub-network.
class AntennaDeficit : public Error {
 public:
  using Error::Error;
};

class InvalidUserCount : public Error {
 public:
  using Error::Error;
};

}  // namespace stpnc

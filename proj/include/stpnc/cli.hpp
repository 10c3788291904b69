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
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stpnc/scheduler.hpp"

namespace stpnc::cli {

enum class Command { simulate, dof_sweep, rate_sweep, verify };
enum class Format { csv, json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitVerifyFailed = 4;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunSpec {
  Command command = Command::simulate;
  Scenario scenario = Scenario::twic;
  int users = 4;  // K for dof-sweep and the general cases
  std::vector<int> relays{2};
  std::uint64_t seed = 0;
  int seeds = 100;
  int trials = 10000;
  std::vector<double> snr_db{};
  int l_max = 30;
  double power = 1.0;
  double noise_var = 0.0;
  unsigned jobs = 0;
  std::optional<std::string> output;
  Format format = Format::csv;
};

// "start:stop:step" in dB, inclusive of stop up to rounding.
std::vector<double> parse_snr_grid(const std::string& text);

// "2" or "1,1,1".
std::vector<int> parse_antenna_list(const std::string& text);

// argv[0] is the program name. Throws UsageError naming the offending flag.
// Returns std::nullopt when help was requested and printed to `out`.
std::optional<RunSpec> parse_args(int argc, const char* const* argv, std::ostream& out);

// Executes the spec and returns the process exit status. Results go to
// spec.output (or `out`); diagnostics go to `err`.
int run(const RunSpec& spec, std::ostream& out, std::ostream& err);

// parse_args + run with exit-code mapping.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stpnc::cli

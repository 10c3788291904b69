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

#include "stpnc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stpnc/dof.hpp"
#include "stpnc/errors.hpp"
#include "stpnc/parallel.hpp"
#include "stpnc/protocol.hpp"
#include "stpnc/rate.hpp"

namespace stpnc::cli {
namespace {

using nlohmann::json;

constexpr double kRecoveryTol = 1e-8;
constexpr double kResidualTol = 1e-9;
constexpr double kSelfTol = 1e-10;

std::string command_name(Command c) {
  switch (c) {
    case Command::simulate: return "simulate";
    case Command::dof_sweep: return "dof-sweep";
    case Command::rate_sweep: return "rate-sweep";
    case Command::verify: return "verify";
  }
  return "?";
}

template <class T>
T parse_number(const std::string& flag, const std::string& text) {
  std::istringstream is(text);
  T v{};
  is >> v;
  if (!is || !is.eof()) throw UsageError(flag + ": cannot parse '" + text + "'");
  return v;
}

// Values collected from the command line and the config file, keyed by long
// flag name without dashes.
struct Collected {
  std::map<std::string, std::string> from_flags;
  json from_config = json::object();

  std::optional<std::string> get(const std::string& key) const {
    if (auto it = from_flags.find(key); it != from_flags.end()) return it->second;
    if (!from_config.contains(key)) return std::nullopt;
    const json& v = from_config.at(key);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
      std::string joined;
      for (const json& x : v) {
        if (!joined.empty()) joined += ",";
        joined += x.is_string() ? x.get<std::string>() : x.dump();
      }
      return joined;
    }
    return v.dump();
  }
};

const std::vector<std::string>& keys_for(Command c) {
  static const std::map<Command, std::vector<std::string>> keys = {
      {Command::simulate,
       {"scenario", "seed", "k1", "k2", "relays", "power", "noise-var", "output", "format"}},
      {Command::verify,
       {"scenario", "seed", "seeds", "k1", "k2", "relays", "jobs", "output", "format"}},
      {Command::dof_sweep, {"k", "l-max", "output", "format"}},
      {Command::rate_sweep, {"snr", "trials", "seed", "jobs", "output", "format"}},
  };
  return keys.at(c);
}

json load_config(const std::string& path, Command c) {
  std::ifstream in(path);
  if (!in) throw UsageError("--config: cannot open '" + path + "'");
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("--config: " + std::string(e.what()));
  }
  if (!cfg.is_object()) throw UsageError("--config: top level must be an object");
  const auto& allowed = keys_for(c);
  for (const auto& [key, value] : cfg.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw UsageError("--config: key '" + key + "' does not apply to " + command_name(c));
    }
  }
  return cfg;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("STPNC_SEED");
  if (env == nullptr || *env == '\0') return 0;
  return parse_number<std::uint64_t>("STPNC_SEED", env);
}

RunSpec build_spec(Command c, const Collected& v) {
  RunSpec s;
  s.command = c;
  s.format = (c == Command::simulate || c == Command::verify) ? Format::json : Format::csv;
  s.seed = default_seed();
  if (c == Command::dof_sweep) s.users = 6;

  if (auto x = v.get("scenario")) {
    try {
      s.scenario = scenario_from_string(*x);
    } catch (const std::invalid_argument&) {
      throw UsageError("--scenario: unknown scenario '" + *x + "'");
    }
  } else if (c == Command::simulate || c == Command::verify) {
    throw UsageError("--scenario is required");
  }
  if (auto x = v.get("seed")) s.seed = parse_number<std::uint64_t>("--seed", *x);
  if (auto x = v.get("seeds")) s.seeds = parse_number<int>("--seeds", *x);
  if (auto x = v.get("trials")) s.trials = parse_number<int>("--trials", *x);
  if (auto x = v.get("l-max")) s.l_max = parse_number<int>("--l-max", *x);
  if (auto x = v.get("k")) s.users = parse_number<int>("--k", *x);
  if (auto x = v.get("power")) s.power = parse_number<double>("--power", *x);
  if (auto x = v.get("noise-var")) s.noise_var = parse_number<double>("--noise-var", *x);
  if (auto x = v.get("jobs")) s.jobs = parse_number<unsigned>("--jobs", *x);
  if (auto x = v.get("output")) s.output = *x;
  if (auto x = v.get("relays")) s.relays = parse_antenna_list(*x);
  if (auto x = v.get("format")) {
    if (*x == "csv") {
      s.format = Format::csv;
    } else if (*x == "json") {
      s.format = Format::json;
    } else {
      throw UsageError("--format: expected csv or json, got '" + *x + "'");
    }
  }
  s.snr_db = parse_snr_grid(v.get("snr").value_or("0:30:1"));

  if (c == Command::simulate || c == Command::verify) {
    if (s.scenario == Scenario::twic || s.scenario == Scenario::twxc) {
      if (v.get("k1") || v.get("k2")) throw UsageError("--k1/--k2: not used by " + to_string(s.scenario));
      if (s.relays != std::vector<int>{2}) {
        throw UsageError("--relays: " + to_string(s.scenario) + " needs a single 2-antenna relay");
      }
      s.users = 4;
    } else if (s.scenario == Scenario::case1) {
      if (v.get("k2")) throw UsageError("--k2: not used by case1");
      s.users = parse_number<int>("--k1", v.get("k1").value_or("3"));
    } else {
      if (v.get("k1")) throw UsageError("--k1: not used by case2");
      s.users = parse_number<int>("--k2", v.get("k2").value_or("4"));
    }
  }
  if (s.seeds < 1) throw UsageError("--seeds: must be >= 1");
  if (s.trials < 1) throw UsageError("--trials: must be >= 1");
  if (s.l_max < 1) throw UsageError("--l-max: must be >= 1");
  if (c == Command::dof_sweep && s.users < 3) throw UsageError("--k: must be >= 3");
  if (!(s.power > 0.0)) throw UsageError("--power: must be > 0");
  if (!(s.noise_var >= 0.0)) throw UsageError("--noise-var: must be >= 0");
  return s;
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Writes to spec.output when set, otherwise to `out`.
void emit(const RunSpec& spec, std::ostream& out, const std::string& text) {
  if (!spec.output) {
    out << text;
    return;
  }
  std::ofstream f(*spec.output, std::ios::binary);
  if (!f) throw UsageError("--output: cannot open '" + *spec.output + "'");
  f << text;
  if (!f) throw UsageError("--output: write failed for '" + *spec.output + "'");
}

Rational expected_dof(Scenario s, int users) {
  switch (s) {
    case Scenario::twic: return Rational(4, 3);
    case Scenario::twxc: return Rational(8, 5);
    case Scenario::case1: return Rational(users, 2);
    case Scenario::case2: return Rational(users * (users - 2), 2 * users - 3);
  }
  return Rational(0);
}

NetworkConfig network_of(const RunSpec& spec) {
  NetworkConfig cfg;
  cfg.users = spec.users;
  cfg.relay_antennas = spec.relays;
  cfg.power = spec.power;
  cfg.noise_var = spec.noise_var;
  return cfg;
}

json report_json(const SimReport& r, const RunSpec& spec) {
  json ranks = json::object();
  for (const auto& [user, rank] : r.effective_ranks) ranks[std::to_string(user)] = rank;
  return {
      {"command", "simulate"},
      {"scenario", to_string(r.scenario)},
      {"users", r.users},
      {"relays", spec.relays},
      {"seed", r.seed},
      {"relay_mode", to_string(r.relay_mode)},
      {"noise_var", spec.noise_var},
      {"slots", r.slots_used},
      {"symbols", r.symbols_delivered},
      {"dof", to_string(r.achieved_dof)},
      {"max_symbol_error", r.max_symbol_error},
      {"constraint_residual", r.constraint_residual},
      {"alignment_residual", r.alignment_residual},
      {"leakage_residual", r.leakage_residual},
      {"self_residual", r.self_residual},
      {"ledger_residual", r.ledger_residual},
      {"effective_ranks", ranks},
  };
}

int run_simulate(const RunSpec& spec, std::ostream& out) {
  const SimReport r = run_end_to_end(spec.scenario, network_of(spec), Seed{spec.seed});
  if (spec.format == Format::json) {
    emit(spec, out, report_json(r, spec).dump(2) + "\n");
    return kExitOk;
  }
  std::ostringstream os;
  os << "scenario,users,seed,relay_mode,slots,symbols,dof,max_symbol_error,constraint_residual,"
        "alignment_residual,leakage_residual,self_residual,ledger_residual\n";
  os << to_string(r.scenario) << ',' << r.users << ',' << r.seed << ',' << to_string(r.relay_mode)
     << ',' << r.slots_used << ',' << r.symbols_delivered << ',' << to_string(r.achieved_dof) << ','
     << fmt_double(r.max_symbol_error) << ',' << fmt_double(r.constraint_residual) << ','
     << fmt_double(r.alignment_residual) << ',' << fmt_double(r.leakage_residual) << ','
     << fmt_double(r.self_residual) << ',' << fmt_double(r.ledger_residual) << '\n';
  emit(spec, out, os.str());
  return kExitOk;
}

struct SeedOutcome {
  bool ok = false;
  std::string failure;
  SimReport report;
  Eigen::Index min_rank = 0;
  Eigen::Index max_rank = 0;
};

int run_verify(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  const NetworkConfig cfg = network_of(spec);
  const Rational want = expected_dof(spec.scenario, spec.users);
  // Infeasible configurations fail identically on every seed; surface them
  // before fanning out.
  make_schedule(spec.scenario, spec.users);

  const auto outcomes = parallel_map<SeedOutcome>(
      static_cast<std::size_t>(spec.seeds), spec.jobs, [&](std::size_t i) {
        SeedOutcome o;
        const Seed seed = derive_trial_seed(Seed{spec.seed}, i);
        try {
          o.report = run_end_to_end(spec.scenario, cfg, seed);
        } catch (const AntennaDeficit&) {
          throw;
        } catch (const Error& e) {
          o.failure = e.what();
          return o;
        }
        const SimReport& r = o.report;
        o.min_rank = std::numeric_limits<Eigen::Index>::max();
        for (const auto& [user, rank] : r.effective_ranks) {
          o.min_rank = std::min(o.min_rank, rank);
          o.max_rank = std::max(o.max_rank, rank);
        }
        const SimReport again = run_end_to_end(spec.scenario, cfg, seed);
        if (r.max_symbol_error >= kRecoveryTol) {
          o.failure = "symbol error " + fmt_double(r.max_symbol_error);
        } else if (r.constraint_residual >= kResidualTol) {
          o.failure = "constraint residual " + fmt_double(r.constraint_residual);
        } else if (r.alignment_residual >= kResidualTol) {
          o.failure = "alignment residual " + fmt_double(r.alignment_residual);
        } else if (r.leakage_residual >= kResidualTol) {
          o.failure = "leakage " + fmt_double(r.leakage_residual);
        } else if (r.self_residual >= kSelfTol) {
          o.failure = "self-interference residual " + fmt_double(r.self_residual);
        } else if (r.ledger_residual >= kResidualTol) {
          o.failure = "ledger residual " + fmt_double(r.ledger_residual);
        } else if (r.achieved_dof != want) {
          o.failure = "dof " + to_string(r.achieved_dof);
        } else if (again.recovered != r.recovered) {
          o.failure = "non-deterministic recovery";
        } else {
          o.ok = true;
        }
        return o;
      });

  int passed = 0;
  double err_max = 0.0, cons = 0.0, align = 0.0, leak = 0.0, self = 0.0, ledger = 0.0;
  Eigen::Index min_rank = std::numeric_limits<Eigen::Index>::max();
  Eigen::Index max_rank = 0;
  json failures = json::array();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const SeedOutcome& o = outcomes[i];
    if (o.ok) ++passed;
    if (!o.failure.empty()) {
      failures.push_back({{"index", i}, {"reason", o.failure}});
      err << "verify: seed index " << i << " failed: " << o.failure << "\n";
    }
    if (o.report.users == 0) continue;
    err_max = std::max(err_max, o.report.max_symbol_error);
    cons = std::max(cons, o.report.constraint_residual);
    align = std::max(align, o.report.alignment_residual);
    leak = std::max(leak, o.report.leakage_residual);
    self = std::max(self, o.report.self_residual);
    ledger = std::max(ledger, o.report.ledger_residual);
    min_rank = std::min(min_rank, o.min_rank);
    max_rank = std::max(max_rank, o.max_rank);
  }
  if (max_rank == 0) min_rank = 0;
  const bool pass = passed == spec.seeds;
  const double max_residual = std::max({cons, align, leak, self, ledger});

  if (spec.format == Format::json) {
    const json j = {
        {"command", "verify"},
        {"scenario", to_string(spec.scenario)},
        {"users", spec.users},
        {"relays", spec.relays},
        {"seed", spec.seed},
        {"seeds", spec.seeds},
        {"passed", passed},
        {"failed", spec.seeds - passed},
        {"dof", to_string(want)},
        {"max_symbol_error", err_max},
        {"max_residual", max_residual},
        {"max_constraint_residual", cons},
        {"max_alignment_residual", align},
        {"max_leakage_residual", leak},
        {"max_self_residual", self},
        {"max_ledger_residual", ledger},
        {"min_rank", min_rank},
        {"max_rank", max_rank},
        {"failures", failures},
        {"pass", pass},
    };
    emit(spec, out, j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "scenario,users,seeds,passed,dof,max_symbol_error,max_residual,min_rank,max_rank,pass\n";
    os << to_string(spec.scenario) << ',' << spec.users << ',' << spec.seeds << ',' << passed << ','
       << to_string(want) << ',' << fmt_double(err_max) << ',' << fmt_double(max_residual) << ','
       << min_rank << ',' << max_rank << ',' << (pass ? "true" : "false") << '\n';
    emit(spec, out, os.str());
  }
  return pass ? kExitOk : kExitVerifyFailed;
}

int run_dof_sweep(const RunSpec& spec, std::ostream& out) {
  const auto rows = dof::sweep_fig4(spec.users, spec.l_max);
  if (spec.format == Format::csv) {
    std::ostringstream os;
    dof::write_sweep_csv(os, rows);
    emit(spec, out, os.str());
    return kExitOk;
  }
  json arr = json::array();
  for (const auto& row : rows) {
    const dof::DoFResult& r = row.result;
    arr.push_back({
        {"L", row.relays},
        {"k1_star", r.stars.k1},
        {"k2_star", r.stars.k2},
        {"k3_star", r.stars.k3},
        {"term_in", to_string(r.term_in)},
        {"term_in_ia", to_string(r.term_in_ia)},
        {"term_ia", to_string(r.term_ia)},
        {"gof", to_string(r.gof)},
        {"stpnc_value", to_string(r.value)},
        {"optimal", r.optimal},
    });
  }
  const json j = {{"command", "dof-sweep"}, {"k", spec.users}, {"rows", arr}};
  emit(spec, out, j.dump(2) + "\n");
  return kExitOk;
}

int run_rate_sweep(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  rate::RateConfig cfg;
  cfg.snr_db_list = spec.snr_db;
  cfg.trials = spec.trials;
  cfg.seed = Seed{spec.seed};
  cfg.jobs = spec.jobs;
  const rate::RateResult r = rate::snr_sweep(cfg);
  if (spec.format == Format::csv) {
    std::ostringstream os;
    rate::write_csv(os, r);
    emit(spec, out, os.str());
    std::ostream& note = spec.output ? out : err;
    note << "crossover_db=" << (r.crossover_db ? fmt_double(*r.crossover_db) : "none") << "\n";
    return kExitOk;
  }
  json pts = json::array();
  for (const auto& p : r.points) {
    pts.push_back({{"snr_db", p.snr_db},
                   {"stpnc_rate", p.stpnc.mean},
                   {"stpnc_stderr", p.stpnc.stderr_},
                   {"tdma_rate", p.tdma.mean},
                   {"tdma_stderr", p.tdma.stderr_}});
  }
  const json j = {{"command", "rate-sweep"},
                  {"trials", spec.trials},
                  {"seed", spec.seed},
                  {"points", pts},
                  {"crossover_db", r.crossover_db ? json(*r.crossover_db) : json(nullptr)}};
  emit(spec, out, j.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

std::vector<double> parse_snr_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw UsageError("--snr: expected start:stop:step, got '" + text + "'");
  const double start = parse_number<double>("--snr", parts[0]);
  const double stop = parse_number<double>("--snr", parts[1]);
  const double step = parse_number<double>("--snr", parts[2]);
  if (!(step > 0.0) || stop < start) throw UsageError("--snr: need step > 0 and stop >= start");
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  if (n > 100000) throw UsageError("--snr: grid too large");
  std::vector<double> grid;
  for (long i = 0; i < n; ++i) grid.push_back(start + static_cast<double>(i) * step);
  return grid;
}

std::vector<int> parse_antenna_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) {
    const int m = parse_number<int>("--relays", p);
    if (m < 1) throw UsageError("--relays: antenna counts must be >= 1");
    out.push_back(m);
  }
  if (out.empty()) throw UsageError("--relays: empty list");
  return out;
}

std::optional<RunSpec> parse_args(int argc, const char* const* argv, std::ostream& out) {
  CLI::App app{"Space-time physical-layer network coding simulator", "stpnc"};
  app.require_subcommand(1);

  struct Sub {
    Command command;
    CLI::App* app;
    std::map<std::string, std::string> values;
    std::string config;
  };
  std::vector<Sub> subs;
  subs.reserve(4);
  const std::pair<Command, const char*> defs[] = {
      {Command::simulate, "Run one seed end to end"},
      {Command::dof_sweep, "Tabulate sum-DoF terms over the number of single-antenna relays"},
      {Command::rate_sweep, "Monte Carlo ergodic sum rate versus SNR"},
      {Command::verify, "Check the protocol invariants over many seeds"},
  };
  const std::map<std::string, std::string> help = {
      {"scenario", "twic | twxc | case1 | case2"},
      {"seed", "Root seed (default: $STPNC_SEED or 0)"},
      {"seeds", "Number of seeds to verify"},
      {"k", "Number of users"},
      {"l-max", "Largest number of relays"},
      {"k1", "Users in the case1 network"},
      {"k2", "Users in the case2 network"},
      {"relays", "Relay antenna counts, e.g. 2 or 1,1,1"},
      {"trials", "Monte Carlo trials"},
      {"snr", "SNR grid start:stop:step in dB"},
      {"output", "Output file (default: stdout)"},
      {"format", "csv | json"},
      {"jobs", "Worker threads (0 = all cores)"},
      {"power", "Transmit power P"},
      {"noise-var", "Noise variance sigma^2"},
  };
  for (const auto& [cmd, desc] : defs) {
    subs.push_back({cmd, app.add_subcommand(command_name(cmd), desc), {}, {}});
  }
  for (Sub& s : subs) {
    for (const std::string& key : keys_for(s.command)) {
      std::string flags = "--" + key;
      if (key == "output") flags = "-o,--output";
      s.app->add_option(flags, s.values[key], help.at(key));
    }
    s.app->add_option("--config", s.config, "JSON file with the same keys as the flags; flags win");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  for (Sub& s : subs) {
    if (!s.app->parsed()) continue;
    Collected v;
    for (const std::string& key : keys_for(s.command)) {
      if (s.app->get_option("--" + key)->count() > 0) v.from_flags[key] = s.values[key];
    }
    if (!s.config.empty()) v.from_config = load_config(s.config, s.command);
    return build_spec(s.command, v);
  }
  throw UsageError("a subcommand is required");
}

int run(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  switch (spec.command) {
    case Command::simulate: return run_simulate(spec, out);
    case Command::verify: return run_verify(spec, out, err);
    case Command::dof_sweep: return run_dof_sweep(spec, out);
    case Command::rate_sweep: return run_rate_sweep(spec, out, err);
  }
  return kExitUsage;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    const std::optional<RunSpec> spec = parse_args(argc, argv, out);
    if (!spec) return kExitOk;
    return run(*spec, out, err);
  } catch (const UsageError& e) {
    err << "stpnc: " << e.what() << "\n";
    return kExitUsage;
  } catch (const AntennaDeficit& e) {
    err << "stpnc: infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const InvalidUserCount& e) {
    err << "stpnc: infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    err << "stpnc: error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace stpnc::cli

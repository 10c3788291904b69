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

#include <catch2/catch_amalgamated.hpp>

#include "stpnc/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace stpnc;

namespace
{
struct Run
{
    int code = 0;
    std::string out;
    std::string err;
};

Run invoke(std::vector<std::string> args)
{
    args.insert(args.begin(), "stpnc");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Run r;
    r.code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

cli::RunSpec parse(std::vector<std::string> args)
{
    args.insert(args.begin(), "stpnc");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    return *cli::parse_args(static_cast<int>(argv.size()), argv.data(), out);
}
} // namespace

TEST_CASE("cli::parse_args - simulate and dof-sweep specs")
{
    const cli::RunSpec s = parse({"simulate", "--scenario", "twic", "--seed", "7"});
    CHECK(s.command == cli::Command::simulate);
    CHECK(s.scenario == Scenario::twic);
    CHECK(s.seed == 7);
    CHECK(s.users == 4);

    const cli::RunSpec d = parse({"dof-sweep", "--k", "6", "--l-max", "30"});
    CHECK(d.command == cli::Command::dof_sweep);
    CHECK(d.users == 6);
    CHECK(d.l_max == 30);
    CHECK(d.format == cli::Format::csv);

    const cli::RunSpec c = parse({"simulate", "--scenario", "case1", "--k1", "4", "--relays", "1,2"});
    CHECK(c.users == 4);
    CHECK(c.relays == std::vector<int>{1, 2});
}

TEST_CASE("cli::parse_args - usage errors name the flag")
{
    const Run bad_flag = invoke({"simulate", "--scenario", "twic", "--bogus"});
    CHECK(bad_flag.code == cli::kExitUsage);
    CHECK(bad_flag.err.find("--bogus") != std::string::npos);

    const Run bad_scenario = invoke({"simulate", "--scenario", "case9"});
    CHECK(bad_scenario.code == cli::kExitUsage);
    CHECK(bad_scenario.err.find("--scenario") != std::string::npos);

    const Run bad_snr = invoke({"rate-sweep", "--snr", "0:x:1"});
    CHECK(bad_snr.code == cli::kExitUsage);
    CHECK(bad_snr.err.find("--snr") != std::string::npos);

    CHECK(invoke({"simulate"}).code == cli::kExitUsage);
    CHECK(invoke({}).code == cli::kExitUsage);
    CHECK(invoke({"simulate", "--scenario", "twic", "--relays", "3"}).code == cli::kExitUsage);
    CHECK(invoke({"verify", "--scenario", "twic", "--seeds", "0"}).code == cli::kExitUsage);
    CHECK(invoke({"dof-sweep", "--k1", "3"}).code == cli::kExitUsage);
    CHECK(invoke({"simulate", "--scenario", "twic", "--format", "xml"}).code == cli::kExitUsage);
}

TEST_CASE("cli::parse_snr_grid and parse_antenna_list")
{
    CHECK(cli::parse_snr_grid("0:30:1").size() == 31);
    CHECK(cli::parse_snr_grid("0:1:0.25") == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(cli::parse_snr_grid("5:5:1") == std::vector<double>{5.0});
    CHECK_THROWS_AS(cli::parse_snr_grid("0:30"), cli::UsageError);
    CHECK_THROWS_AS(cli::parse_snr_grid("0:30:0"), cli::UsageError);
    CHECK_THROWS_AS(cli::parse_snr_grid("5:0:1"), cli::UsageError);
    CHECK(cli::parse_antenna_list("1,1,1") == std::vector<int>{1, 1, 1});
    CHECK_THROWS_AS(cli::parse_antenna_list("2,0"), cli::UsageError);
    CHECK_THROWS_AS(cli::parse_antenna_list(""), cli::UsageError);
}

TEST_CASE("cli::run - infeasible configurations exit 3")
{
    const Run r = invoke({"simulate", "--scenario", "case1", "--k1", "4", "--relays", "2"});
    CHECK(r.code == cli::kExitInfeasible);
    CHECK(r.err.find("infeasible") != std::string::npos);
    CHECK(invoke({"simulate", "--scenario", "case2", "--k2", "3"}).code == cli::kExitInfeasible);
    CHECK(invoke({"verify", "--scenario", "case2", "--k2", "5", "--relays", "2", "--seeds", "3"}).code ==
          cli::kExitInfeasible);
}

TEST_CASE("cli::run - verify summary")
{
    const Run r = invoke({"verify", "--scenario", "twxc", "--seeds", "100"});
    CHECK(r.code == cli::kExitOk);
    CHECK(r.out.find("\"pass\": true") != std::string::npos);
    CHECK(r.out.find("\"max_residual\"") != std::string::npos);
    CHECK(r.out.find("\"dof\": \"8/5\"") != std::string::npos);
}

TEST_CASE("cli::run - dof-sweep CSV")
{
    const Run r = invoke({"dof-sweep", "--k", "6", "--l-max", "30"});
    CHECK(r.code == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 31);
    CHECK(r.out.rfind("L,term_in,term_in_ia,term_ia,gof,stpnc_value", 0) == 0);
}

TEST_CASE("cli::run - rate-sweep reports the crossover")
{
    const Run r = invoke({"rate-sweep", "--snr", "0:12:1", "--trials", "2000", "--format", "json"});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"crossover_db\"") != std::string::npos);
    const Run csv = invoke({"rate-sweep", "--snr", "0:12:1", "--trials", "2000"});
    CHECK(csv.err.find("crossover_db=") != std::string::npos);
}

TEST_CASE("cli::run - output files are byte identical and config is merged")
{
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "stpnc_cli_test";
    fs::create_directories(dir);
    const std::string a = (dir / "a.json").string(), b = (dir / "b.json").string();
    CHECK(invoke({"simulate", "--scenario", "case2", "--k2", "5", "--relays", "3", "--seed", "9", "-o", a}).code == 0);
    CHECK(invoke({"simulate", "--scenario", "case2", "--k2", "5", "--relays", "3", "--seed", "9", "-o", b}).code == 0);
    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    CHECK(!slurp(a).empty());
    CHECK(slurp(a) == slurp(b));

    const std::string cfg = (dir / "cfg.json").string();
    {
        std::ofstream f(cfg);
        f << R"({"scenario": "case1", "k1": 3, "relays": [2], "seed": 4})";
    }
    const cli::RunSpec s = parse({"simulate", "--config", cfg, "--seed", "5"});
    CHECK(s.scenario == Scenario::case1);
    CHECK(s.users == 3);
    CHECK(s.seed == 5);  // flags win

    {
        std::ofstream f(cfg);
        f << R"({"scenario": "twic", "trials": 4})";
    }
    CHECK(invoke({"simulate", "--config", cfg}).code == cli::kExitUsage);
    fs::remove_all(dir);
}

TEST_CASE("cli::parse_args - STPNC_SEED provides the default seed")
{
    ::setenv("STPNC_SEED", "31", 1);
    CHECK(parse({"simulate", "--scenario", "twic"}).seed == 31);
    CHECK(parse({"simulate", "--scenario", "twic", "--seed", "2"}).seed == 2);
    ::setenv("STPNC_SEED", "abc", 1);
    CHECK(invoke({"simulate", "--scenario", "twic"}).code == cli::kExitUsage);
    ::unsetenv("STPNC_SEED");
    CHECK(parse({"simulate", "--scenario", "twic"}).seed == 0);
}

TEST_CASE("cli::run - verify output does not depend on --jobs")
{
    const Run a = invoke({"verify", "--scenario", "case2", "--k2", "5", "--relays", "3", "--seeds", "12", "--jobs", "1"});
    const Run b = invoke({"verify", "--scenario", "case2", "--k2", "5", "--relays", "3", "--seeds", "12", "--jobs", "3"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}

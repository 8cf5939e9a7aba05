// Copyright 2026 The evfleet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "temp_dir.hpp"

namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Result cli(const std::string& args, const std::string& env = {}) {
  static int n = 0;
  const auto err_file = fs::temp_directory_path() / ("evf_cli_err_" + std::to_string(::getpid()) + "_" + std::to_string(n++));
  const std::string cmd = env + " '" EVFLEET_CLI_PATH "' " + args + " 2>'" + err_file.string() + "'";
  Result r;
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  while (auto got = std::fread(buf, 1, sizeof buf, p)) r.out.append(buf, got);
  const int status = ::pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err_file);
  fs::remove(err_file);
  return r;
}

const std::string kFleet =
    "--vehicles 6 --trips-per-vehicle 12 --min-trip-minutes 12 --max-trip-minutes 20 "
    "--aging-map v06=1.2 --epochs 3 --hidden-widths 20,16,12,8,4";
const std::string kSmall = kFleet + " --validation-vehicles v04,v05";

TEST(Cli, ConfigShowsFlagsAndFileOverride) {
  evfleet::testing::TempDir dir("evf_cli_cfg");
  auto r = cli("config --epochs 9 --seed 3", "EVFLEET_ROOT='" + dir.path().string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("epochs = 9\n"), std::string::npos);
  EXPECT_NE(r.out.find("seed = 3\n"), std::string::npos);
  EXPECT_NE(r.out.find("root = " + dir.path().string() + "\n"), std::string::npos);

  std::ofstream(dir.path() / "c.conf") << "epochs = 4\n";
  r = cli("config --epochs 9 --config '" + (dir.path() / "c.conf").string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("epochs = 4\n"), std::string::npos);
}

TEST(Cli, UsageErrorsExitWithTwo) {
  auto r = cli("train --epochs ten --root /tmp/x");
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind("error cli.UsageError: ", 0), 0u) << r.err;
  r = cli("frobnicate");
  EXPECT_NE(r.code, 0);
}

TEST(Cli, FullRunThenEvalOnNothing) {
  evfleet::testing::TempDir dir("evf_cli_run");
  const std::string root = " --root '" + dir.path().string() + "' ";
  auto r = cli("run" + root + kSmall);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("synth: wrote 72 trips of 6 vehicles"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("aging: baseline"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("v06 mean|r|"), std::string::npos) << r.out;
  const auto art = dir.path() / "_artifacts";
  for (const char* f : {"dataset.csv", "model_linear.json", "model_mlp.json", "eval_report_linear.csv",
                        "eval_report_mlp.csv", "scatter_mlp.svg", "aging_verdicts.csv", "train_loss_mlp.csv"}) {
    EXPECT_TRUE(fs::exists(art / f)) << f;
  }

  r = cli("eval" + root + kFleet + " --validation-vehicles v99");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("error models.EvalError", 0), 0u) << r.err;
}

TEST(Cli, SameSeedSameBytes) {
  evfleet::testing::TempDir a("evf_cli_a"), b("evf_cli_b");
  for (const auto* d : {&a, &b}) {
    for (const char* step : {"synth", "extract", "train", "eval"}) {
      const auto r = cli(std::string(step) + " --seed 5 --root '" + d->path().string() + "' " + kSmall);
      ASSERT_EQ(r.code, 0) << step << ": " << r.err;
    }
  }
  for (const char* f : {"dataset.csv", "model_linear.json", "model_mlp.json", "eval_report_mlp.csv",
                        "predictions_mlp.csv"}) {
    const auto x = slurp(a.path() / "_artifacts" / f);
    EXPECT_FALSE(x.empty()) << f;
    EXPECT_EQ(x, slurp(b.path() / "_artifacts" / f)) << f;
  }
}

TEST(Cli, ReplayThroughAnInProcessBroker) {
  evfleet::testing::TempDir dir("evf_cli_replay");
  const std::string base = " --root '" + dir.path().string() +
                           "' --vehicles 2 --trips-per-vehicle 2 --min-trip-minutes 8 --max-trip-minutes 9";
  ASSERT_EQ(cli("synth" + base).code, 0);
  const auto r = cli("replay" + base + " --endpoint 127.0.0.1:0");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("replay: 4 trips"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("recorded 4 trips, 0 mismatched"), std::string::npos) << r.out;
}

}  // namespace

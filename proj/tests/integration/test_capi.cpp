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

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "evfleet/evfleet.h"
#include "temp_dir.hpp"

namespace {

namespace fs = std::filesystem;

struct Config {
  evf_config* c = nullptr;
  Config() { EXPECT_EQ(evf_config_new(&c), EVF_OK); }
  ~Config() { evf_config_free(c); }
  void set(const char* k, const std::string& v) { ASSERT_EQ(evf_config_set(c, k, v.c_str()), EVF_OK) << evf_last_error(); }
};

TEST(CApi, StatusNamesAreQualified) {
  EXPECT_STREQ(evf_status_name(EVF_OK), "ok");
  EXPECT_STREQ(evf_status_name(EVF_E_EVAL), "models.EvalError");
  EXPECT_STREQ(evf_status_name(EVF_E_USAGE), "cli.UsageError");
  EXPECT_STREQ(evf_status_name(EVF_E_CORRUPT_TRIP), "store.CorruptTrip");
  EXPECT_NE(std::string(evf_version()), "");
}

TEST(CApi, BadSettingsReportUsageErrors) {
  Config cfg;
  EXPECT_EQ(evf_config_set(cfg.c, "epochs", "many"), EVF_E_USAGE);
  EXPECT_EQ(std::string(evf_last_error()).rfind("cli.UsageError: ", 0), 0u) << evf_last_error();
  EXPECT_EQ(evf_config_set(cfg.c, "epochs", "12"), EVF_OK);
  EXPECT_STREQ(evf_last_error(), "");
  EXPECT_NE(std::string(evf_config_text(cfg.c)).find("epochs = 12\n"), std::string::npos);
  EXPECT_EQ(evf_config_set(nullptr, "epochs", "1"), EVF_E_INVALID_ARGUMENT);
  EXPECT_EQ(evf_config_set(cfg.c, nullptr, "1"), EVF_E_INVALID_ARGUMENT);
  EXPECT_EQ(evf_config_load_file(cfg.c, "/definitely/not/here.conf"), EVF_E_USAGE);
}

TEST(CApi, MissingFilesAreReported) {
  evf_model* m = nullptr;
  EXPECT_NE(evf_model_load("/definitely/not/here.json", &m), EVF_OK);
  EXPECT_EQ(m, nullptr);
  evf_dataset* d = nullptr;
  EXPECT_NE(evf_dataset_load("/definitely/not/here.csv", &d), EVF_OK);
  EXPECT_EQ(d, nullptr);
}

TEST(CApi, PipelineStepsProduceLoadableArtifacts) {
  evfleet::testing::TempDir dir("evf_capi");
  Config cfg;
  cfg.set("root", dir.path().string());
  cfg.set("vehicles", "3");
  cfg.set("trips_per_vehicle", "3");
  cfg.set("min_trip_minutes", "13");
  cfg.set("max_trip_minutes", "14");
  cfg.set("epochs", "2");
  cfg.set("hidden_widths", "10,8,6,4,2");

  ASSERT_EQ(evf_cmd_synth(cfg.c), EVF_OK) << evf_last_error();
  EXPECT_NE(std::string(evf_last_output()).find("synth: wrote 9 trips of 3 vehicles"), std::string::npos);
  EXPECT_EQ(evf_cmd_synth(cfg.c), EVF_E_ALREADY_EXISTS);
  ASSERT_EQ(evf_cmd_extract(cfg.c), EVF_OK) << evf_last_error();
  ASSERT_EQ(evf_cmd_train(cfg.c), EVF_OK) << evf_last_error();
  ASSERT_EQ(evf_cmd_eval(cfg.c), EVF_OK) << evf_last_error();
  EXPECT_NE(std::string(evf_last_output()).find("mlp"), std::string::npos);

  const auto art = dir.path() / "_artifacts";
  evf_dataset* ds = nullptr;
  ASSERT_EQ(evf_dataset_load((art / "dataset.csv").c_str(), &ds), EVF_OK) << evf_last_error();
  EXPECT_EQ(evf_dataset_size(ds), 18u);
  ASSERT_EQ(evf_dataset_feature_count(ds), 90u);
  std::vector<double> x(90);
  double gamma = 0.0;
  ASSERT_EQ(evf_dataset_sample(ds, 0, x.data(), &gamma), EVF_OK);
  EXPECT_LT(gamma, 0.0);
  EXPECT_EQ(evf_dataset_sample(ds, 18, x.data(), &gamma), EVF_E_INVALID_ARGUMENT);

  for (const char* file : {"model_linear.json", "model_mlp.json"}) {
    evf_model* m = nullptr;
    ASSERT_EQ(evf_model_load((art / file).c_str(), &m), EVF_OK) << evf_last_error();
    EXPECT_EQ(evf_model_feature_count(m), 90u);
    double g = NAN;
    ASSERT_EQ(evf_model_predict(m, x.data(), x.size(), &g), EVF_OK);
    EXPECT_TRUE(std::isfinite(g));
    EXPECT_EQ(evf_model_predict(m, x.data(), 89, &g), EVF_E_INPUT);
    evf_model_free(m);
  }
  evf_dataset_free(ds);
}

TEST(CApi, BrokerBindsAnEphemeralPort) {
  Config cfg;
  cfg.set("endpoint", "127.0.0.1:0");
  evf_broker* b = nullptr;
  ASSERT_EQ(evf_broker_start(cfg.c, &b), EVF_OK) << evf_last_error();
  const std::string ep = evf_broker_endpoint(b);
  EXPECT_EQ(ep.rfind("127.0.0.1:", 0), 0u);
  EXPECT_NE(ep, "127.0.0.1:0");
  evf_broker_free(b);
}

}  // namespace

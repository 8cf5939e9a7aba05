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

#include "evfleet/models/metrics.hpp"
#include "evfleet/util/rng.hpp"
#include "fixtures.hpp"

namespace evfleet {
namespace {

using models::evaluate_pairs;
using testing::error_of;

TEST(Metrics, HandComputedTwoSampleCase) {
  const std::vector<double> g{-0.002, -0.004};
  const std::vector<double> gh{-0.003, -0.004};
  const auto r = evaluate_pairs(g, gh);
  EXPECT_NEAR(r.mae, 0.0005, 1e-12 * 0.0005);
  EXPECT_NEAR(r.rmae, 0.25, 1e-12 * 0.25);
  EXPECT_NEAR(r.mse, 5e-7, 1e-12 * 5e-7);
  EXPECT_NEAR(r.rmse, std::sqrt(5e-7), 1e-12 * 7.0711e-4);
  EXPECT_NEAR(r.rmse, 7.0711e-4, 1e-8);
  EXPECT_EQ(r.n_samples, 2u);
  EXPECT_EQ(r.n_excluded_rmae, 0u);
}

TEST(Metrics, PerfectPredictionsScoreZero) {
  const std::vector<double> g{-0.001, 0.0005, -0.01};
  const auto r = evaluate_pairs(g, g);
  EXPECT_EQ(r.mae, 0.0);
  EXPECT_EQ(r.rmae, 0.0);
  EXPECT_EQ(r.mse, 0.0);
  EXPECT_EQ(r.rmse, 0.0);
}

TEST(Metrics, NearZeroLabelsAreLeftOutOfRmaeOnly) {
  const std::vector<double> g{-0.002, 0.0, 5e-10};
  const std::vector<double> gh{-0.001, 0.001, 0.0};
  const auto r = evaluate_pairs(g, gh);
  EXPECT_EQ(r.n_excluded_rmae, 2u);
  EXPECT_NEAR(r.rmae, 0.5, 1e-15);
  EXPECT_NEAR(r.mae, (0.001 + 0.001 + 5e-10) / 3.0, 1e-18);
}

TEST(Metrics, RmseSquaredEqualsMse) {
  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    const auto n = 1 + rng.below(50);
    std::vector<double> g(n), gh(n);
    for (std::size_t k = 0; k < n; ++k) {
      g[k] = rng.normal(-0.003, 0.002);
      gh[k] = g[k] + rng.normal(0.0, 0.0005);
    }
    const auto r = evaluate_pairs(g, gh);
    ASSERT_NEAR(r.rmse * r.rmse, r.mse, 1e-12 * std::max(r.mse, 1e-300));
    ASSERT_GE(r.mae, 0.0);
    ASSERT_GE(r.rmae, 0.0);
  }
}

TEST(Metrics, EmptyOrMismatchedInputIsAnEvalError) {
  EXPECT_EQ(error_of([] { evaluate_pairs({}, {}); }), "models.EvalError");
  const std::vector<double> a{1.0}, b{1.0, 2.0};
  EXPECT_EQ(error_of([&] { evaluate_pairs(a, b); }), "models.EvalError");
  EXPECT_EQ(error_of([] { models::evaluate([](auto) { return 0.0; }, features::Dataset{}); }), "models.EvalError");
}

TEST(Metrics, ReportCsvUsesTableColumns) {
  const std::vector<double> g{-0.002, -0.004};
  const std::vector<double> gh{-0.003, -0.004};
  const auto csv = models::eval_report_csv("mlp", evaluate_pairs(g, gh));
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "model,MAE [km^-1],RMAE [-],MSE [km^-2],RMSE [km^-1],n_samples,n_excluded_rmae");
  EXPECT_EQ(csv.substr(csv.find('\n') + 1, 14), "mlp,5e-04,0.25");
}

}  // namespace
}  // namespace evfleet

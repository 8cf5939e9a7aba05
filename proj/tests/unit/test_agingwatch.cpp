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

#include "evfleet/agingwatch/agingwatch.hpp"
#include "fixtures.hpp"

namespace evfleet {
namespace {

using namespace agingwatch;
using testing::error_of;
using testing::synthetic_dataset;

double label(std::span<const double> x) { return -0.004 + 5e-4 * x[0]; }

// Predicts the label with a fixed error that alternates in sign.
models::PredictFn off_by(double err) {
  return [err](std::span<const double> x) { return label(x) + (x[1] > 0 ? err : -err); };
}

TEST(AgingWatch, PerfectModelGivesAZeroBaseline) {
  const auto ds = synthetic_dataset(40, 3, 1, label);
  const auto b = build_baseline(label, ds, "abc");
  EXPECT_EQ(b.baseline_mae, 0.0);
  EXPECT_EQ(b.baseline_std, 0.0);
  EXPECT_EQ(b.n_samples, 40u);
  EXPECT_EQ(b.model_fingerprint, "abc");
}

TEST(AgingWatch, TooFewSamplesForABaseline) {
  const auto ds = synthetic_dataset(kMinSamples - 1, 3, 1, label);
  EXPECT_EQ(error_of([&] { build_baseline(label, ds); }), "agingwatch.BaselineError");
  EXPECT_EQ(error_of([&] { build_baseline(label, synthetic_dataset(10, 3, 1, label)); }), "agingwatch.BaselineError");
}

TEST(AgingWatch, BaselineIsMeanAndSampleStdOfAbsResiduals) {
  // |r| alternates between 1e-4 and 3e-4 by construction below.
  const auto ds = synthetic_dataset(40, 3, 2, label);
  const auto predict = [](std::span<const double> x) { return label(x) + (x[1] > 0 ? 1e-4 : -3e-4); };
  const auto b = build_baseline(predict, ds);
  double mean = 0.0;
  std::vector<double> r;
  for (const auto& s : ds.samples()) r.push_back(std::abs(predict(s.x) - s.gamma));
  for (double v : r) mean += v;
  mean /= static_cast<double>(r.size());
  double var = 0.0;
  for (double v : r) var += (v - mean) * (v - mean);
  var /= static_cast<double>(r.size() - 1);
  EXPECT_NEAR(b.baseline_mae, mean, 1e-18);
  EXPECT_NEAR(b.baseline_std, std::sqrt(var), 1e-15);
}

TEST(AgingWatch, ResidualsAtTheBaselineMeanScoreZero) {
  // 2^-12 keeps the mean of the copies exact.
  ResidualBaseline b{"", 0x1p-12, 5e-5, 100};
  const std::vector<double> r(12, 0x1p-12);
  const auto v = assess_residuals("v01", r, b);
  EXPECT_EQ(v.z_score, 0.0);
  EXPECT_FALSE(v.flagged);
  EXPECT_EQ(v.n_samples, 12u);
  EXPECT_EQ(v.k_threshold, kDefaultK);
}

TEST(AgingWatch, ZScoreFollowsTheOneSidedTest) {
  ResidualBaseline b{"", 2e-4, 5e-5, 100};
  const std::vector<double> r(16, 3e-4);
  const auto v = assess_residuals("v02", r, b, 3.0);
  EXPECT_NEAR(v.z_score, (3e-4 - 2e-4) / (5e-5 / 4.0 + kStdGuard), 1e-9);
  EXPECT_TRUE(v.flagged);
  EXPECT_FALSE(assess_residuals("v02", r, b, v.z_score).flagged);
}

TEST(AgingWatch, LargerResidualsNeverLowerTheScore) {
  ResidualBaseline b{"", 2e-4, 5e-5, 100};
  Rng rng(3);
  std::vector<double> r(20);
  for (auto& v : r) v = std::abs(rng.normal(2e-4, 5e-5));
  double last = assess_residuals("v", r, b).z_score;
  for (int i = 0; i < 50; ++i) {
    r[rng.below(r.size())] += 1e-5;
    const double z = assess_residuals("v", r, b).z_score;
    ASSERT_GE(z, last);
    last = z;
  }
}

TEST(AgingWatch, AssessChecksItsInput) {
  const auto fresh = synthetic_dataset(60, 3, 4, label);
  const auto b = build_baseline(off_by(1e-4), fresh);
  const auto one = synthetic_dataset(20, 3, 5, label, 1, "car");
  const auto v = assess_vehicle(off_by(1e-4), b, one);
  EXPECT_EQ(v.vehicle_id, "car0");
  EXPECT_NEAR(v.mean_abs_residual, 1e-4, 1e-16);
  EXPECT_FALSE(v.flagged);
  EXPECT_TRUE(assess_vehicle(off_by(4e-4), b, one).flagged);

  EXPECT_EQ(error_of([&] { assess_vehicle(off_by(0), b, features::Dataset{}); }), "agingwatch.AssessError");
  const auto mixed = synthetic_dataset(20, 3, 5, label, 2);
  EXPECT_EQ(error_of([&] { assess_vehicle(off_by(0), b, mixed); }), "agingwatch.AssessError");
  EXPECT_EQ(error_of([&] { assess_residuals("v", {}, b); }), "agingwatch.AssessError");
}

TEST(AgingWatch, VerdictsCsv) {
  std::vector<AgingVerdict> vs(2);
  vs[0].vehicle_id = "v01";
  vs[0].mean_abs_residual = 0.0001;
  vs[0].z_score = -0.5;
  vs[1].vehicle_id = "v02";
  vs[1].mean_abs_residual = 0.0009;
  vs[1].z_score = 12;
  vs[1].flagged = true;
  EXPECT_EQ(verdicts_csv(vs),
            "vehicle_id,mean_abs_residual,z_score,flagged\n"
            "v01,1e-04,-0.5,false\n"
            "v02,9e-04,12,true\n");
}

}  // namespace
}  // namespace evfleet

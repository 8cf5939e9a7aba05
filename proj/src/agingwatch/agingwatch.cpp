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

#include "evfleet/agingwatch/agingwatch.hpp"

#include <cmath>

#include "evfleet/error.hpp"
#include "evfleet/util/text.hpp"

namespace evfleet::agingwatch {
namespace {

std::vector<double> abs_residuals(const models::PredictFn& predict, const features::Dataset& ds) {
  std::vector<double> r;
  r.reserve(ds.size());
  for (const auto& s : ds.samples()) r.push_back(std::abs(s.gamma - predict(s.x)));
  return r;
}

double mean(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

}  // namespace

ResidualBaseline build_baseline(const models::PredictFn& predict, const features::Dataset& fresh_valid,
                                std::string model_fingerprint) {
  if (fresh_valid.size() < kMinSamples) {
    throw Error(ErrorCode::BaselineError, "a baseline needs at least " + std::to_string(kMinSamples) +
                                              " samples, got " + std::to_string(fresh_valid.size()));
  }
  const auto r = abs_residuals(predict, fresh_valid);
  ResidualBaseline b;
  b.model_fingerprint = std::move(model_fingerprint);
  b.n_samples = r.size();
  b.baseline_mae = mean(r);
  double ss = 0.0;
  for (double x : r) ss += (x - b.baseline_mae) * (x - b.baseline_mae);
  b.baseline_std = std::sqrt(ss / static_cast<double>(r.size() - 1));
  return b;
}

AgingVerdict assess_residuals(const std::string& vehicle_id, std::span<const double> abs_residuals,
                              const ResidualBaseline& baseline, double k) {
  if (abs_residuals.empty()) throw Error(ErrorCode::AssessError, "no samples for vehicle " + vehicle_id);
  AgingVerdict v;
  v.vehicle_id = vehicle_id;
  v.n_samples = abs_residuals.size();
  v.k_threshold = k;
  v.mean_abs_residual = mean(abs_residuals);
  const double se = baseline.baseline_std / std::sqrt(static_cast<double>(v.n_samples)) + kStdGuard;
  v.z_score = (v.mean_abs_residual - baseline.baseline_mae) / se;
  v.flagged = v.z_score > k;
  return v;
}

AgingVerdict assess_vehicle(const models::PredictFn& predict, const ResidualBaseline& baseline,
                            const features::Dataset& vehicle_samples, double k) {
  if (vehicle_samples.empty()) throw Error(ErrorCode::AssessError, "no samples to assess");
  const auto vehicles = vehicle_samples.vehicles();
  if (vehicles.size() != 1) {
    throw Error(ErrorCode::AssessError,
                "samples span " + std::to_string(vehicles.size()) + " vehicles; assess one at a time");
  }
  const auto r = abs_residuals(predict, vehicle_samples);
  return assess_residuals(vehicles.front(), r, baseline, k);
}

std::string verdicts_csv(std::span<const AgingVerdict> verdicts) {
  std::string out = "vehicle_id,mean_abs_residual,z_score,flagged\n";
  for (const auto& v : verdicts) {
    out += v.vehicle_id;
    out += ',';
    append_double(out, v.mean_abs_residual);
    out += ',';
    append_double(out, v.z_score);
    out += v.flagged ? ",true\n" : ",false\n";
  }
  return out;
}

}  // namespace evfleet::agingwatch

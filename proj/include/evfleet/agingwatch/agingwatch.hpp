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

#pragma once

#include <span>
#include <string>
#include <vector>

#include "evfleet/features/features.hpp"
#include "evfleet/models/metrics.hpp"

namespace evfleet::agingwatch {

inline constexpr std::size_t kMinSamples = 30;
inline constexpr double kDefaultK = 3.0;
inline constexpr double kStdGuard = 1e-15;

/// Residual statistics of a model on fresh-battery vehicles.
struct ResidualBaseline {
  std::string model_fingerprint;
  double baseline_mae = 0.0;  // km^-1
  double baseline_std = 0.0;  // km^-1, sample standard deviation of |r|
  std::size_t n_samples = 0;

  bool operator==(const ResidualBaseline&) const = default;
};

struct AgingVerdict {
  std::string vehicle_id;
  double mean_abs_residual = 0.0;  // km^-1
  double z_score = 0.0;
  bool flagged = false;
  double k_threshold = kDefaultK;
  std::size_t n_samples = 0;
};

/// Mean and standard deviation of |Gamma - Gamma_hat| over fresh validation
/// samples. Throws Error(BaselineError) with fewer than kMinSamples samples.
ResidualBaseline build_baseline(const models::PredictFn& predict, const features::Dataset& fresh_valid,
                                std::string model_fingerprint = {});

/// One-sided z-test on the vehicle's mean absolute residual:
///   z = (mean|r| - baseline_mae) / (baseline_std / sqrt(n) + 1e-15)
/// flagged iff z > k. Throws Error(AssessError) on empty or mixed-vehicle input.
AgingVerdict assess_vehicle(const models::PredictFn& predict, const ResidualBaseline& baseline,
                            const features::Dataset& vehicle_samples, double k = kDefaultK);

/// The same statistic from precomputed absolute residuals.
AgingVerdict assess_residuals(const std::string& vehicle_id, std::span<const double> abs_residuals,
                              const ResidualBaseline& baseline, double k = kDefaultK);

/// Header vehicle_id,mean_abs_residual,z_score,flagged then one row each.
std::string verdicts_csv(std::span<const AgingVerdict> verdicts);

}  // namespace evfleet::agingwatch

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

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "evfleet/features/features.hpp"

namespace evfleet::models {

/// Labels with |Gamma| at or below this are left out of RMAE.
inline constexpr double kRmaeLabelFloor = 1e-9;

struct EvalReport {
  double mae = 0.0;   // km^-1
  double rmae = 0.0;  // dimensionless
  double mse = 0.0;   // km^-2
  double rmse = 0.0;  // km^-1
  std::size_t n_samples = 0;
  std::size_t n_excluded_rmae = 0;

  bool operator==(const EvalReport&) const = default;
};

using PredictFn = std::function<double(std::span<const double>)>;

/// MAE, RMAE, MSE and RMSE of predictions against labels. RMAE averages over
/// the samples with |Gamma| > kRmaeLabelFloor only (0 when there are none).
/// Throws Error(EvalError) when empty or the spans differ in length.
EvalReport evaluate_pairs(std::span<const double> gamma, std::span<const double> gamma_hat);

EvalReport evaluate(const PredictFn& predict, const features::Dataset& valid);

/// Predictions for every sample, in dataset order.
std::vector<double> predict_all(const PredictFn& predict, const features::Dataset& ds);

/// Header plus one row; columns mirror the model comparison table:
/// model,MAE [km^-1],RMAE [-],MSE [km^-2],RMSE [km^-1],n_samples,n_excluded_rmae
std::string eval_report_csv(const std::string& model_name, const EvalReport& report);

}  // namespace evfleet::models

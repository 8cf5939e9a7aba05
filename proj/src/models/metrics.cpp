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

#include "evfleet/models/metrics.hpp"

#include <cmath>

#include "evfleet/error.hpp"
#include "evfleet/util/text.hpp"

namespace evfleet::models {

EvalReport evaluate_pairs(std::span<const double> gamma, std::span<const double> gamma_hat) {
  if (gamma.empty()) throw Error(ErrorCode::EvalError, "no validation samples");
  if (gamma.size() != gamma_hat.size()) throw Error(ErrorCode::EvalError, "label and prediction counts differ");

  EvalReport r;
  r.n_samples = gamma.size();
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  double rel_sum = 0.0;
  std::size_t rel_n = 0;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const double e = gamma[i] - gamma_hat[i];
    abs_sum += std::abs(e);
    sq_sum += e * e;
    if (std::abs(gamma[i]) > kRmaeLabelFloor) {
      rel_sum += std::abs(e / gamma[i]);
      ++rel_n;
    }
  }
  const auto n = static_cast<double>(r.n_samples);
  r.mae = abs_sum / n;
  r.mse = sq_sum / n;
  r.rmse = std::sqrt(r.mse);
  r.rmae = rel_n == 0 ? 0.0 : rel_sum / static_cast<double>(rel_n);
  r.n_excluded_rmae = r.n_samples - rel_n;
  return r;
}

std::vector<double> predict_all(const PredictFn& predict, const features::Dataset& ds) {
  std::vector<double> out;
  out.reserve(ds.size());
  for (const auto& s : ds.samples()) out.push_back(predict(s.x));
  return out;
}

EvalReport evaluate(const PredictFn& predict, const features::Dataset& valid) {
  if (valid.empty()) throw Error(ErrorCode::EvalError, "no validation samples");
  std::vector<double> gamma;
  gamma.reserve(valid.size());
  for (const auto& s : valid.samples()) gamma.push_back(s.gamma);
  const auto gamma_hat = predict_all(predict, valid);
  return evaluate_pairs(gamma, gamma_hat);
}

std::string eval_report_csv(const std::string& model_name, const EvalReport& report) {
  std::string out = "model,MAE [km^-1],RMAE [-],MSE [km^-2],RMSE [km^-1],n_samples,n_excluded_rmae\n";
  out += model_name;
  for (double v : {report.mae, report.rmae, report.mse, report.rmse}) {
    out += ',';
    append_double(out, v);
  }
  out += ',' + std::to_string(report.n_samples) + ',' + std::to_string(report.n_excluded_rmae) + '\n';
  return out;
}

}  // namespace evfleet::models

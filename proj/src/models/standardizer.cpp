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

#include "evfleet/models/standardizer.hpp"

#include <cmath>

#include "evfleet/error.hpp"

namespace evfleet::models {
namespace {

// Relative spread below which a column is treated as constant.
constexpr double kFlatTolerance = 1e-12;

}  // namespace

Standardizer Standardizer::fit(const features::Dataset& ds) {
  if (ds.empty()) throw Error(ErrorCode::FitError, "cannot standardize an empty dataset");
  const auto d = ds.feature_count();
  const auto n = static_cast<double>(ds.size());

  Standardizer st;
  st.feature_mean.assign(d, 0.0);
  st.feature_std.assign(d, 0.0);
  st.feature_flagged.assign(d, false);

  for (const auto& s : ds.samples()) {
    for (std::size_t j = 0; j < d; ++j) st.feature_mean[j] += s.x[j];
    st.label_mean += s.gamma;
  }
  for (auto& m : st.feature_mean) m /= n;
  st.label_mean /= n;

  double label_var = 0.0;
  for (const auto& s : ds.samples()) {
    for (std::size_t j = 0; j < d; ++j) {
      const double c = s.x[j] - st.feature_mean[j];
      st.feature_std[j] += c * c;
    }
    const double c = s.gamma - st.label_mean;
    label_var += c * c;
  }
  for (std::size_t j = 0; j < d; ++j) {
    const double sd = std::sqrt(st.feature_std[j] / n);
    const bool flat = !(sd > kFlatTolerance * std::max(1.0, std::abs(st.feature_mean[j])));
    st.feature_flagged[j] = flat;
    st.feature_std[j] = flat ? 1.0 : sd;
  }
  const double label_sd = std::sqrt(label_var / n);
  st.label_flagged = !(label_sd > kFlatTolerance * std::max(1e-12, std::abs(st.label_mean)));
  st.label_std = st.label_flagged ? 1.0 : label_sd;
  return st;
}

void Standardizer::transform(std::span<const double> x, std::span<double> z) const {
  for (std::size_t j = 0; j < feature_mean.size(); ++j) {
    z[j] = feature_flagged[j] ? 0.0 : (x[j] - feature_mean[j]) / feature_std[j];
  }
}

}  // namespace evfleet::models

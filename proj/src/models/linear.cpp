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

#include "evfleet/models/linear.hpp"

#include <algorithm>
#include <cmath>

#include "evfleet/error.hpp"

namespace evfleet::models {

double LinearModel::predict(std::span<const double> x) const {
  if (x.size() != weights.size()) throw Error(ErrorCode::InputError, "feature vector has the wrong length");
  double y = bias;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!std::isfinite(x[j])) throw Error(ErrorCode::InputError, "non-finite feature x" + std::to_string(j + 1));
    y += weights[j] * x[j];
  }
  return y;
}

bool cholesky_solve(std::span<double> a, std::span<double> b, std::size_t n) {
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a[i * n + i]));
  const double floor = max_diag * 1e-15 * static_cast<double>(n);

  // A = L L', L stored in the lower triangle.
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (!std::isfinite(d) || d <= floor || d <= 0.0) return false;
    const double l = std::sqrt(d);
    a[j * n + j] = l;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = s / l;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= a[i * n + k] * b[k];
    b[i] = s / a[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[k * n + i] * b[k];
    b[i] = s / a[i * n + i];
  }
  return true;
}

LinearModel fit_linear(const features::Dataset& train, double ridge_lambda) {
  if (train.empty()) throw Error(ErrorCode::FitError, "no training samples");
  if (!(ridge_lambda >= 0.0) || !std::isfinite(ridge_lambda)) {
    throw Error(ErrorCode::FitError, "ridge_lambda must be finite and >= 0");
  }
  LinearModel m;
  m.ridge_lambda = ridge_lambda;
  m.standardizer = Standardizer::fit(train);
  const auto& st = m.standardizer;
  const auto d = train.feature_count();

  std::vector<double> gram(d * d, 0.0);
  std::vector<double> rhs(d, 0.0);
  std::vector<double> z(d);
  for (const auto& s : train.samples()) {
    st.transform(s.x, z);
    const double y = st.transform_label(s.gamma);
    for (std::size_t i = 0; i < d; ++i) {
      if (z[i] == 0.0) continue;
      rhs[i] += z[i] * y;
      for (std::size_t k = 0; k <= i; ++k) gram[i * d + k] += z[i] * z[k];
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t k = 0; k < i; ++k) gram[k * d + i] = gram[i * d + k];
    gram[i * d + i] += ridge_lambda;
  }
  if (!cholesky_solve(gram, rhs, d)) {
    throw Error(ErrorCode::FitError, "normal equations are singular; raise ridge_lambda");
  }

  // Centered standardized data has a zero intercept; undo the scaling.
  m.weights.assign(d, 0.0);
  m.bias = st.label_mean;
  for (std::size_t j = 0; j < d; ++j) {
    if (st.feature_flagged[j]) continue;
    m.weights[j] = st.label_std * rhs[j] / st.feature_std[j];
    m.bias -= m.weights[j] * st.feature_mean[j];
  }
  return m;
}

}  // namespace evfleet::models

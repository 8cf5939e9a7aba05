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
#include <vector>

#include "evfleet/features/features.hpp"
#include "evfleet/models/standardizer.hpp"

namespace evfleet::models {

inline constexpr double kDefaultRidgeLambda = 1e-9;

/// Gamma_hat = W . x + b in raw feature space.
struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  Standardizer standardizer;
  double ridge_lambda = kDefaultRidgeLambda;

  /// Throws Error(InputError) on a wrong-sized or non-finite input.
  double predict(std::span<const double> x) const;

  bool operator==(const LinearModel&) const = default;
};

/// Least squares with a ridge term, solved in standardized space via
/// Cholesky on (Z'Z + lambda I) w = Z'y and mapped back to raw weights.
/// Throws Error(FitError) on an empty dataset or a system that is not
/// numerically positive definite.
LinearModel fit_linear(const features::Dataset& train, double ridge_lambda = kDefaultRidgeLambda);

/// Solves A x = b in place for symmetric positive-definite A (row-major,
/// n x n); A is overwritten with its Cholesky factor. Returns false when a
/// pivot is not safely positive.
bool cholesky_solve(std::span<double> a, std::span<double> b, std::size_t n);

}  // namespace evfleet::models

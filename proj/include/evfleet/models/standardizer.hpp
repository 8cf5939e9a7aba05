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

namespace evfleet::models {

/// Z-score statistics of a training set. A zero-variance feature keeps
/// std = 1, is flagged, and always maps to 0 in standardized space.
struct Standardizer {
  std::vector<double> feature_mean;
  std::vector<double> feature_std;
  std::vector<bool> feature_flagged;
  double label_mean = 0.0;
  double label_std = 1.0;
  bool label_flagged = false;

  /// Population statistics over the dataset; throws Error(FitError) if empty.
  static Standardizer fit(const features::Dataset& ds);

  std::size_t feature_count() const noexcept { return feature_mean.size(); }

  void transform(std::span<const double> x, std::span<double> z) const;
  double transform_label(double gamma) const noexcept { return (gamma - label_mean) / label_std; }
  double inverse_label(double z) const noexcept { return label_mean + label_std * z; }

  bool operator==(const Standardizer&) const = default;
};

}  // namespace evfleet::models

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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "evfleet/features/features.hpp"
#include "evfleet/models/linear.hpp"
#include "evfleet/models/metrics.hpp"
#include "evfleet/models/mlp.hpp"

namespace evfleet::models {

using AnyModel = std::variant<LinearModel, MlpModel>;

/// A fitted model plus what it was trained on.
struct ModelArtifact {
  AnyModel model;
  std::string dataset_fingerprint;
  std::size_t n_train_samples = 0;
  std::optional<TrainConfig> train_config;  // Model B only

  /// "linear" or "mlp".
  std::string kind() const;
  double predict(std::span<const double> x) const;
  PredictFn predictor() const;

  bool operator==(const ModelArtifact&) const = default;
};

/// FNV-1a 64 of the dataset's CSV form, as 16 hex digits.
std::string dataset_fingerprint(const features::Dataset& ds);

/// JSON document: kind, widths, standardizer, flattened parameters,
/// training configuration and dataset fingerprint. Numbers round-trip exactly.
std::string to_text(const ModelArtifact& artifact);

/// Throws Error(ArtifactError) on malformed or inconsistent documents.
ModelArtifact parse_artifact(std::string_view text);

/// FNV-1a 64 of the artifact text.
std::string model_fingerprint(const ModelArtifact& artifact);

}  // namespace evfleet::models

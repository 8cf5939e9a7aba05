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

#include <cstdint>
#include <span>
#include <vector>

#include "evfleet/features/features.hpp"
#include "evfleet/models/adam.hpp"
#include "evfleet/models/standardizer.hpp"

namespace evfleet::models {

/// Dense feed-forward network: ReLU on every hidden layer, linear output.
///
/// Parameters live in one flat vector, layer by layer; each layer stores its
/// weight matrix row-major (out x in) followed by its bias vector.
class Network {
 public:
  Network() = default;
  /// widths = {inputs, hidden..., outputs}; all parameters start at zero.
  explicit Network(std::vector<std::size_t> widths);

  std::span<const std::size_t> widths() const noexcept { return widths_; }
  std::size_t layer_count() const noexcept { return widths_.empty() ? 0 : widths_.size() - 1; }
  std::size_t input_width() const noexcept { return widths_.front(); }
  std::size_t parameter_count() const noexcept { return params_.size(); }

  std::span<double> params() noexcept { return params_; }
  std::span<const double> params() const noexcept { return params_; }

  /// Offset of layer l's weights inside params(); its biases follow at
  /// offset + out * in.
  std::size_t layer_offset(std::size_t l) const noexcept { return offsets_[l]; }
  double& weight(std::size_t l, std::size_t row, std::size_t col) {
    return params_[offsets_[l] + row * widths_[l] + col];
  }
  double& bias(std::size_t l, std::size_t row) {
    return params_[offsets_[l] + widths_[l + 1] * widths_[l] + row];
  }

  /// Output of the first output node for one input.
  double forward(std::span<const double> input) const;

  /// Mean squared error over a batch and its exact gradient with respect to
  /// every parameter. inputs is row-major (batch x input_width); grad is
  /// overwritten and must have parameter_count() entries.
  double loss_and_gradient(std::span<const double> inputs, std::span<const double> targets,
                           std::span<double> grad) const;

  bool operator==(const Network&) const = default;

 private:
  std::vector<std::size_t> widths_;
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
};

inline constexpr std::size_t kHiddenLayers = 5;

/// Model B: input -> five hidden ReLU layers of strictly decreasing width -> 1.
struct MlpModel {
  Network network;
  Standardizer standardizer;
  std::uint64_t seed = 0;

  std::span<const std::size_t> widths() const noexcept { return network.widths(); }

  /// Raw features in, raw Gamma_hat out. Throws Error(InputError) on a
  /// wrong-sized or non-finite input.
  double predict(std::span<const double> x) const;

  bool operator==(const MlpModel&) const = default;
};

inline const std::vector<std::size_t>& default_hidden_widths() {
  static const std::vector<std::size_t> widths{75, 60, 45, 30, 15};
  return widths;
}

/// Throws Error(ConfigError) unless widths = {in, h1..h5, 1} is strictly
/// decreasing.
void validate_mlp_widths(std::span<const std::size_t> widths);

/// Weights uniform in [-sqrt(6 / fan_in), +sqrt(6 / fan_in)] drawn from
/// Rng(seed) layer by layer, row by row, column by column; biases zero.
/// The standardizer is left as the identity.
MlpModel init_mlp(std::span<const std::size_t> widths, std::uint64_t seed);

/// mlp_forward is MlpModel::predict.
double mlp_forward(const MlpModel& m, std::span<const double> x);

/// Gradient of L = (1/B) sum (y_hat - y)^2 over a batch of raw samples, both
/// sides in standardized space, laid out like Network::params().
std::vector<double> mlp_gradients(const MlpModel& m, std::span<const features::TripSection> batch,
                                  double* loss = nullptr);

struct TrainConfig {
  int epochs = 100;
  std::size_t batch_size = 32;
  double learning_rate = 0.001;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 0;
  bool shuffle = true;
  std::vector<std::size_t> hidden_widths = default_hidden_widths();

  /// Throws Error(ConfigError) on non-positive sizes or betas outside (0, 1).
  void validate() const;
  AdamConfig adam() const { return {learning_rate, adam_beta1, adam_beta2, adam_eps}; }

  bool operator==(const TrainConfig&) const = default;
};

struct TrainResult {
  MlpModel model;
  /// Mean standardized training loss of each epoch, accumulated over the
  /// batches before their updates.
  std::vector<double> loss_history;
};

/// Mini-batch Adam on mean squared error in standardized space. The epoch
/// permutation comes from Rng(mix_seed(seed, epoch + 1)); the last partial
/// batch is kept. Single-threaded, so bitwise reproducible.
TrainResult train_mlp(const features::Dataset& train, const TrainConfig& config);

}  // namespace evfleet::models

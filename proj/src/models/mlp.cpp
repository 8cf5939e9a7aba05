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

#include "evfleet/models/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "evfleet/error.hpp"
#include "evfleet/util/rng.hpp"

namespace evfleet::models {

Network::Network(std::vector<std::size_t> widths) : widths_(std::move(widths)) {
  if (widths_.size() < 2 || std::any_of(widths_.begin(), widths_.end(), [](std::size_t w) { return w == 0; })) {
    throw Error(ErrorCode::ConfigError, "a network needs at least two non-empty layers");
  }
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
    offsets_.push_back(offset);
    offset += widths_[l] * widths_[l + 1] + widths_[l + 1];
  }
  params_.assign(offset, 0.0);
}

double Network::forward(std::span<const double> input) const {
  std::vector<double> a(input.begin(), input.end());
  std::vector<double> next;
  const auto layers = layer_count();
  for (std::size_t l = 0; l < layers; ++l) {
    const auto in = widths_[l];
    const auto out = widths_[l + 1];
    const double* w = params_.data() + offsets_[l];
    const double* b = w + out * in;
    next.assign(out, 0.0);
    for (std::size_t r = 0; r < out; ++r) {
      double s = b[r];
      const double* row = w + r * in;
      for (std::size_t c = 0; c < in; ++c) s += row[c] * a[c];
      next[r] = (l + 1 < layers) ? std::max(s, 0.0) : s;
    }
    a.swap(next);
  }
  return a.front();
}

double Network::loss_and_gradient(std::span<const double> inputs, std::span<const double> targets,
                                  std::span<double> grad) const {
  const auto batch = targets.size();
  const auto in_width = widths_.front();
  if (batch == 0 || inputs.size() != batch * in_width || grad.size() != params_.size()) {
    throw Error(ErrorCode::ConfigError, "batch shape does not match the network");
  }
  std::fill(grad.begin(), grad.end(), 0.0);
  const auto layers = layer_count();

  // acts[l] holds the output of layer l-1 (acts[0] is the input).
  std::vector<std::vector<double>> acts(layers + 1);
  for (std::size_t l = 0; l <= layers; ++l) acts[l].resize(widths_[l]);
  std::vector<double> delta;
  std::vector<double> delta_prev;

  const double inv_b = 1.0 / static_cast<double>(batch);
  double loss = 0.0;
  for (std::size_t n = 0; n < batch; ++n) {
    std::copy_n(inputs.begin() + static_cast<std::ptrdiff_t>(n * in_width), in_width, acts[0].begin());
    for (std::size_t l = 0; l < layers; ++l) {
      const auto in = widths_[l];
      const auto out = widths_[l + 1];
      const double* w = params_.data() + offsets_[l];
      const double* b = w + out * in;
      const auto& a = acts[l];
      auto& z = acts[l + 1];
      for (std::size_t r = 0; r < out; ++r) {
        double s = b[r];
        const double* row = w + r * in;
        for (std::size_t c = 0; c < in; ++c) s += row[c] * a[c];
        z[r] = (l + 1 < layers) ? std::max(s, 0.0) : s;
      }
    }

    const double residual = acts[layers][0] - targets[n];
    loss += residual * residual;
    // Only the first output node enters the loss.
    delta.assign(widths_[layers], 0.0);
    delta[0] = 2.0 * residual * inv_b;

    for (std::size_t l = layers; l-- > 0;) {
      const auto in = widths_[l];
      const auto out = widths_[l + 1];
      const double* w = params_.data() + offsets_[l];
      double* gw = grad.data() + offsets_[l];
      double* gb = gw + out * in;
      const auto& a = acts[l];
      delta_prev.assign(in, 0.0);
      for (std::size_t r = 0; r < out; ++r) {
        const double d = delta[r];
        if (d == 0.0) continue;
        gb[r] += d;
        double* grow = gw + r * in;
        const double* row = w + r * in;
        for (std::size_t c = 0; c < in; ++c) {
          grow[c] += d * a[c];
          delta_prev[c] += row[c] * d;
        }
      }
      if (l > 0) {
        // ReLU derivative: 1 where the unit was active.
        for (std::size_t c = 0; c < in; ++c) {
          if (!(a[c] > 0.0)) delta_prev[c] = 0.0;
        }
      }
      delta.swap(delta_prev);
    }
  }
  return loss * inv_b;
}

void validate_mlp_widths(std::span<const std::size_t> widths) {
  if (widths.size() != kHiddenLayers + 2) {
    throw Error(ErrorCode::ConfigError, "Model B needs exactly five hidden layers");
  }
  if (widths.back() != 1) throw Error(ErrorCode::ConfigError, "Model B has a single output node");
  for (std::size_t i = 1; i < widths.size(); ++i) {
    if (!(widths[i] < widths[i - 1])) {
      throw Error(ErrorCode::ConfigError, "layer widths must decrease strictly from input to output");
    }
  }
}

MlpModel init_mlp(std::span<const std::size_t> widths, std::uint64_t seed) {
  validate_mlp_widths(widths);
  MlpModel m;
  m.seed = seed;
  m.network = Network(std::vector<std::size_t>(widths.begin(), widths.end()));
  Rng rng(seed);
  for (std::size_t l = 0; l < m.network.layer_count(); ++l) {
    const auto in = widths[l];
    const auto out = widths[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(in));
    for (std::size_t r = 0; r < out; ++r) {
      for (std::size_t c = 0; c < in; ++c) m.network.weight(l, r, c) = rng.uniform(-limit, limit);
    }
  }
  const auto d = widths.front();
  m.standardizer.feature_mean.assign(d, 0.0);
  m.standardizer.feature_std.assign(d, 1.0);
  m.standardizer.feature_flagged.assign(d, false);
  return m;
}

double MlpModel::predict(std::span<const double> x) const {
  if (x.size() != network.input_width() || x.size() != standardizer.feature_count()) {
    throw Error(ErrorCode::InputError, "feature vector has the wrong length");
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!std::isfinite(x[j])) throw Error(ErrorCode::InputError, "non-finite feature x" + std::to_string(j + 1));
  }
  std::vector<double> z(x.size());
  standardizer.transform(x, z);
  return standardizer.inverse_label(network.forward(z));
}

double mlp_forward(const MlpModel& m, std::span<const double> x) { return m.predict(x); }

std::vector<double> mlp_gradients(const MlpModel& m, std::span<const features::TripSection> batch, double* loss) {
  if (batch.empty()) throw Error(ErrorCode::ConfigError, "empty batch");
  const auto d = m.network.input_width();
  std::vector<double> inputs(batch.size() * d);
  std::vector<double> targets(batch.size());
  for (std::size_t n = 0; n < batch.size(); ++n) {
    if (batch[n].x.size() != d) throw Error(ErrorCode::InputError, "feature vector has the wrong length");
    m.standardizer.transform(batch[n].x, std::span<double>(inputs).subspan(n * d, d));
    targets[n] = m.standardizer.transform_label(batch[n].gamma);
  }
  std::vector<double> grad(m.network.parameter_count());
  const double l = m.network.loss_and_gradient(inputs, targets, grad);
  if (loss) *loss = l;
  return grad;
}

void TrainConfig::validate() const {
  if (epochs < 0) throw Error(ErrorCode::ConfigError, "epochs must be >= 0");
  if (batch_size == 0) throw Error(ErrorCode::ConfigError, "batch_size must be positive");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw Error(ErrorCode::ConfigError, "learning rate must be positive");
  }
  if (!(adam_beta1 > 0.0 && adam_beta1 < 1.0) || !(adam_beta2 > 0.0 && adam_beta2 < 1.0)) {
    throw Error(ErrorCode::ConfigError, "Adam betas must lie in (0, 1)");
  }
  if (!(adam_eps > 0.0)) throw Error(ErrorCode::ConfigError, "Adam epsilon must be positive");
  if (hidden_widths.size() != kHiddenLayers) {
    throw Error(ErrorCode::ConfigError, "hidden widths must list five layers");
  }
}

TrainResult train_mlp(const features::Dataset& train, const TrainConfig& config) {
  config.validate();
  if (train.empty()) throw Error(ErrorCode::FitError, "no training samples");

  const auto d = train.feature_count();
  std::vector<std::size_t> widths{d};
  widths.insert(widths.end(), config.hidden_widths.begin(), config.hidden_widths.end());
  widths.push_back(1);

  TrainResult result;
  auto& model = result.model;
  model = init_mlp(widths, config.seed);
  model.standardizer = Standardizer::fit(train);

  const auto n = train.size();
  std::vector<double> z(n * d);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    model.standardizer.transform(train[i].x, std::span<double>(z).subspan(i * d, d));
    y[i] = model.standardizer.transform_label(train[i].gamma);
  }

  const auto adam = config.adam();
  AdamState state(model.network.parameter_count());
  std::vector<double> grad(model.network.parameter_count());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> batch_x;
  std::vector<double> batch_y;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    if (config.shuffle) {
      Rng rng(mix_seed(config.seed, static_cast<std::uint64_t>(epoch) + 1));
      std::iota(order.begin(), order.end(), std::size_t{0});
      rng.shuffle(order);
    }
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const auto size = std::min(config.batch_size, n - start);
      batch_x.resize(size * d);
      batch_y.resize(size);
      for (std::size_t k = 0; k < size; ++k) {
        const auto row = order[start + k];
        std::copy_n(z.begin() + static_cast<std::ptrdiff_t>(row * d), d,
                    batch_x.begin() + static_cast<std::ptrdiff_t>(k * d));
        batch_y[k] = y[row];
      }
      const double loss = model.network.loss_and_gradient(batch_x, batch_y, grad);
      epoch_loss += loss * static_cast<double>(size);
      adam_step(model.network.params(), grad, state, adam);
    }
    result.loss_history.push_back(epoch_loss / static_cast<double>(n));
  }
  return result;
}

}  // namespace evfleet::models

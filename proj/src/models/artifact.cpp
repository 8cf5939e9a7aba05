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

#include "evfleet/models/artifact.hpp"

#include <cmath>

#include "evfleet/error.hpp"
#include "evfleet/util/text.hpp"
#include "json.hpp"

namespace evfleet::models {
namespace {

using nlohmann::json;

constexpr int kArtifactVersion = 1;

json standardizer_json(const Standardizer& st) {
  return json{{"feature_mean", st.feature_mean},   {"feature_std", st.feature_std},
              {"feature_flagged", st.feature_flagged}, {"label_mean", st.label_mean},
              {"label_std", st.label_std},             {"label_flagged", st.label_flagged}};
}

Standardizer standardizer_from(const json& j) {
  Standardizer st;
  st.feature_mean = j.at("feature_mean").get<std::vector<double>>();
  st.feature_std = j.at("feature_std").get<std::vector<double>>();
  st.feature_flagged = j.at("feature_flagged").get<std::vector<bool>>();
  st.label_mean = j.at("label_mean").get<double>();
  st.label_std = j.at("label_std").get<double>();
  st.label_flagged = j.at("label_flagged").get<bool>();
  const auto d = st.feature_mean.size();
  if (st.feature_std.size() != d || st.feature_flagged.size() != d) {
    throw Error(ErrorCode::ArtifactError, "standardizer vectors differ in length");
  }
  for (double s : st.feature_std) {
    if (!(s > 0.0)) throw Error(ErrorCode::ArtifactError, "standardizer std must be positive");
  }
  if (!(st.label_std > 0.0)) throw Error(ErrorCode::ArtifactError, "standardizer std must be positive");
  return st;
}

json train_config_json(const TrainConfig& c) {
  return json{{"epochs", c.epochs},         {"batch_size", c.batch_size}, {"learning_rate", c.learning_rate},
              {"adam_beta1", c.adam_beta1}, {"adam_beta2", c.adam_beta2}, {"adam_eps", c.adam_eps},
              {"seed", c.seed},             {"shuffle", c.shuffle},       {"hidden_widths", c.hidden_widths}};
}

TrainConfig train_config_from(const json& j) {
  TrainConfig c;
  c.epochs = j.at("epochs").get<int>();
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.adam_beta1 = j.at("adam_beta1").get<double>();
  c.adam_beta2 = j.at("adam_beta2").get<double>();
  c.adam_eps = j.at("adam_eps").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.shuffle = j.at("shuffle").get<bool>();
  c.hidden_widths = j.at("hidden_widths").get<std::vector<std::size_t>>();
  return c;
}

void require_finite(const std::vector<double>& values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::ArtifactError, "non-finite model parameter");
  }
}

}  // namespace

std::string ModelArtifact::kind() const { return std::holds_alternative<LinearModel>(model) ? "linear" : "mlp"; }

double ModelArtifact::predict(std::span<const double> x) const {
  return std::visit([x](const auto& m) { return m.predict(x); }, model);
}

PredictFn ModelArtifact::predictor() const {
  return [this](std::span<const double> x) { return predict(x); };
}

std::string dataset_fingerprint(const features::Dataset& ds) { return hex64(fnv1a64(features::dataset_csv(ds))); }

std::string to_text(const ModelArtifact& artifact) {
  json j;
  j["format"] = "evfleet-model";
  j["version"] = kArtifactVersion;
  j["kind"] = artifact.kind();
  j["dataset_fingerprint"] = artifact.dataset_fingerprint;
  j["n_train_samples"] = artifact.n_train_samples;
  if (const auto* lin = std::get_if<LinearModel>(&artifact.model)) {
    j["feature_count"] = lin->weights.size();
    j["ridge_lambda"] = lin->ridge_lambda;
    j["standardizer"] = standardizer_json(lin->standardizer);
    j["weights"] = lin->weights;
    j["bias"] = lin->bias;
  } else {
    const auto& mlp = std::get<MlpModel>(artifact.model);
    const auto widths = mlp.widths();
    j["feature_count"] = widths.front();
    j["widths"] = std::vector<std::size_t>(widths.begin(), widths.end());
    j["seed"] = mlp.seed;
    j["standardizer"] = standardizer_json(mlp.standardizer);
    const auto params = mlp.network.params();
    j["parameters"] = std::vector<double>(params.begin(), params.end());
  }
  if (artifact.train_config) j["train_config"] = train_config_json(*artifact.train_config);
  return j.dump(1) + "\n";
}

ModelArtifact parse_artifact(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != "evfleet-model" || j.at("version").get<int>() != kArtifactVersion) {
      throw Error(ErrorCode::ArtifactError, "not an evfleet model artifact of a supported version");
    }
    ModelArtifact a;
    a.dataset_fingerprint = j.at("dataset_fingerprint").get<std::string>();
    a.n_train_samples = j.at("n_train_samples").get<std::size_t>();
    if (j.contains("train_config")) a.train_config = train_config_from(j.at("train_config"));
    const auto kind = j.at("kind").get<std::string>();
    const auto d = j.at("feature_count").get<std::size_t>();

    if (kind == "linear") {
      LinearModel m;
      m.ridge_lambda = j.at("ridge_lambda").get<double>();
      m.standardizer = standardizer_from(j.at("standardizer"));
      m.weights = j.at("weights").get<std::vector<double>>();
      m.bias = j.at("bias").get<double>();
      require_finite(m.weights);
      if (m.weights.size() != d || m.standardizer.feature_count() != d) {
        throw Error(ErrorCode::ArtifactError, "linear model dimensions disagree");
      }
      a.model = std::move(m);
    } else if (kind == "mlp") {
      MlpModel m;
      const auto widths = j.at("widths").get<std::vector<std::size_t>>();
      validate_mlp_widths(widths);
      m.network = Network(widths);
      m.seed = j.at("seed").get<std::uint64_t>();
      m.standardizer = standardizer_from(j.at("standardizer"));
      const auto params = j.at("parameters").get<std::vector<double>>();
      require_finite(params);
      if (params.size() != m.network.parameter_count() || widths.front() != d || m.standardizer.feature_count() != d) {
        throw Error(ErrorCode::ArtifactError, "network dimensions disagree");
      }
      std::copy(params.begin(), params.end(), m.network.params().begin());
      a.model = std::move(m);
    } else {
      throw Error(ErrorCode::ArtifactError, "unknown model kind '" + kind + "'");
    }
    return a;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ArtifactError, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ArtifactError) throw;
    throw Error(ErrorCode::ArtifactError, e.what());
  }
}

std::string model_fingerprint(const ModelArtifact& artifact) { return hex64(fnv1a64(to_text(artifact))); }

}  // namespace evfleet::models

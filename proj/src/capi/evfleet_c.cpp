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

#include "evfleet/evfleet.h"

#include <algorithm>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>

#include "evfleet/error.hpp"
#include "evfleet/ingest/net.hpp"
#include "evfleet/models/artifact.hpp"
#include "evfleet/pipeline/pipeline.hpp"

using namespace evfleet;

struct evf_config {
  pipeline::PipelineConfig config;
  std::string text;
};

struct evf_broker {
  ingest::Broker broker;
  std::string endpoint;
};

struct evf_model {
  models::ModelArtifact artifact;
  std::string kind;
};

struct evf_dataset {
  features::Dataset dataset;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_output;

evf_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound: return EVF_E_NOT_FOUND;
    case ErrorCode::StructuralError: return EVF_E_STRUCTURAL;
    case ErrorCode::ParamError: return EVF_E_PARAM;
    case ErrorCode::ZeroDistance: return EVF_E_ZERO_DISTANCE;
    case ErrorCode::ProtocolError: return EVF_E_PROTOCOL;
    case ErrorCode::ConnectionError: return EVF_E_CONNECTION;
    case ErrorCode::ReplayAborted: return EVF_E_REPLAY_ABORTED;
    case ErrorCode::AlreadyExists: return EVF_E_ALREADY_EXISTS;
    case ErrorCode::IoError: return EVF_E_IO;
    case ErrorCode::CorruptTrip: return EVF_E_CORRUPT_TRIP;
    case ErrorCode::BadSplit: return EVF_E_BAD_SPLIT;
    case ErrorCode::CorruptDataset: return EVF_E_CORRUPT_DATASET;
    case ErrorCode::FitError: return EVF_E_FIT;
    case ErrorCode::InputError: return EVF_E_INPUT;
    case ErrorCode::ConfigError: return EVF_E_CONFIG;
    case ErrorCode::EvalError: return EVF_E_EVAL;
    case ErrorCode::ArtifactError: return EVF_E_ARTIFACT;
    case ErrorCode::BaselineError: return EVF_E_BASELINE;
    case ErrorCode::AssessError: return EVF_E_ASSESS;
    case ErrorCode::UsageError: return EVF_E_USAGE;
  }
  return EVF_E_INTERNAL;
}

evf_status fail(evf_status status, const std::string& message) {
  g_last_error = std::string(evf_status_name(status)) + ": " + message;
  return status;
}

// Runs fn, mapping exceptions onto status codes.
template <typename Fn>
evf_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return EVF_OK;
  } catch (const Error& e) {
    // what() already carries the "<module>.<Kind>: " prefix.
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    return fail(EVF_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(EVF_E_INTERNAL, e.what());
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

extern "C" {

const char* evf_status_name(evf_status status) {
  switch (status) {
    case EVF_OK: return "ok";
    case EVF_E_NOT_FOUND: return "core.NotFound";
    case EVF_E_STRUCTURAL: return "core.StructuralError";
    case EVF_E_PARAM: return "synthfleet.ParamError";
    case EVF_E_ZERO_DISTANCE: return "synthfleet.ZeroDistance";
    case EVF_E_PROTOCOL: return "ingest.ProtocolError";
    case EVF_E_CONNECTION: return "ingest.ConnectionError";
    case EVF_E_REPLAY_ABORTED: return "ingest.ReplayAborted";
    case EVF_E_ALREADY_EXISTS: return "store.AlreadyExists";
    case EVF_E_IO: return "store.IoError";
    case EVF_E_CORRUPT_TRIP: return "store.CorruptTrip";
    case EVF_E_BAD_SPLIT: return "features.BadSplit";
    case EVF_E_CORRUPT_DATASET: return "features.CorruptDataset";
    case EVF_E_FIT: return "models.FitError";
    case EVF_E_INPUT: return "models.InputError";
    case EVF_E_CONFIG: return "models.ConfigError";
    case EVF_E_EVAL: return "models.EvalError";
    case EVF_E_ARTIFACT: return "models.ArtifactError";
    case EVF_E_BASELINE: return "agingwatch.BaselineError";
    case EVF_E_ASSESS: return "agingwatch.AssessError";
    case EVF_E_USAGE: return "cli.UsageError";
    case EVF_E_INVALID_ARGUMENT: return "capi.InvalidArgument";
    case EVF_E_INTERNAL: return "capi.Internal";
  }
  return "capi.Internal";
}

const char* evf_last_error(void) { return g_last_error.c_str(); }
const char* evf_last_output(void) { return g_last_output.c_str(); }
const char* evf_version(void) { return "0.1.0"; }

evf_status evf_config_new(evf_config** out) {
  if (!out) return fail(EVF_E_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] {
    auto* c = new evf_config;
    c->config.sync_seeds();
    *out = c;
  });
}

void evf_config_free(evf_config* config) { delete config; }

evf_status evf_config_set(evf_config* config, const char* key, const char* value) {
  if (!config || !key || !value) return fail(EVF_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::string k = key;
    std::replace(k.begin(), k.end(), '-', '_');
    pipeline::apply_setting(config->config, k, value);
  });
}

evf_status evf_config_load_file(evf_config* config, const char* path) {
  if (!config || !path) return fail(EVF_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorCode::UsageError, std::string("cannot read config file ") + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    pipeline::apply_config_text(config->config, ss.str());
  });
}

const char* evf_config_text(evf_config* config) {
  if (!config) return "";
  config->text = pipeline::to_text(config->config);
  return config->text.c_str();
}

evf_status evf_cmd_synth(const evf_config* config) {
  if (!config) return fail(EVF_E_INVALID_ARGUMENT, "null config");
  return guarded([&] {
    config->config.validate();
    const auto s = pipeline::run_synth(config->config);
    g_last_output = "synth: wrote " + std::to_string(s.trips) + " trips of " + std::to_string(s.vehicles) +
                    " vehicles to " + config->config.root.string() + "\n";
  });
}

evf_status evf_cmd_extract(const evf_config* config) {
  if (!config) return fail(EVF_E_INVALID_ARGUMENT, "null config");
  return guarded([&] {
    config->config.validate();
    const auto s = pipeline::run_extract(config->config);
    g_last_output = "extract: " + std::to_string(s.trips) + " trips -> " + std::to_string(s.sections) +
                    " sections (too short " + std::to_string(s.discards.trips_too_short) + ", faulty " +
                    std::to_string(s.discards.trips_faulty) + ", structural " +
                    std::to_string(s.discards.trips_structural) + ", empty windows " +
                    std::to_string(s.discards.sections_empty_window) + ", zero distance " +
                    std::to_string(s.discards.sections_zero_distance) + ")\n";
  });
}

evf_status evf_cmd_train(const evf_config* config) {
  if (!config) return fail(EVF_E_INVALID_ARGUMENT, "null config");
  return guarded([&] {
    config->config.validate();
    const auto s = pipeline::run_train(config->config);
    g_last_output = "train: " + std::to_string(s.train_samples) + " training samples;";
    for (const auto& w : s.written) g_last_output += " wrote " + w;
    g_last_output += "\n";
  });
}

evf_status evf_cmd_eval(const evf_config* config) {
  if (!config) return fail(EVF_E_INVALID_ARGUMENT, "null config");
  return guarded([&] {
    config->config.validate();
    const auto s = pipeline::run_eval(config->config);
    g_last_output = "model   MAE[1/km]   RMAE[-]   MSE[1/km^2]   RMSE[1/km]   n\n";
    for (const auto& [name, r] : s.reports) {
      g_last_output += name + "  " + fmt(r.mae) + "  " + fmt(r.rmae) + "  " + fmt(r.mse) + "  " + fmt(r.rmse) + "  " +
                       std::to_string(r.n_samples) + "\n";
    }
  });
}

evf_status evf_cmd_aging(const evf_config* config) {
  if (!config) return fail(EVF_E_INVALID_ARGUMENT, "null config");
  return guarded([&] {
    config->config.validate();
    const auto s = pipeline::run_aging(config->config);
    g_last_output = "aging: baseline mae " + fmt(s.baseline.baseline_mae) + " std " + fmt(s.baseline.baseline_std) +
                    " over " + std::to_string(s.baseline.n_samples) + " samples\n";
    for (const auto& v : s.verdicts) {
      g_last_output += "  " + v.vehicle_id + " mean|r| " + fmt(v.mean_abs_residual) + " z " + fmt(v.z_score) +
                       (v.flagged ? " FLAGGED\n" : " ok\n");
    }
  });
}

evf_status evf_cmd_replay(const evf_config* config) {
  if (!config) return fail(EVF_E_INVALID_ARGUMENT, "null config");
  return guarded([&] {
    config->config.validate();
    const auto s = pipeline::run_replay(config->config);
    g_last_output = "replay: " + std::to_string(s.trips) + " trips, " + std::to_string(s.published) +
                    " publishes; recorded " + std::to_string(s.recorded_trips) + " trips, " +
                    std::to_string(s.mismatched_trips) + " mismatched, " + std::to_string(s.dropped) +
                    " samples dropped\n";
    if (s.mismatched_trips > 0) {
      throw Error(ErrorCode::ReplayAborted, std::to_string(s.mismatched_trips) + " trips differ after replay");
    }
  });
}

evf_status evf_broker_start(const evf_config* config, evf_broker** out) {
  if (!config || !out) return fail(EVF_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto b = std::make_unique<evf_broker>();
    b->broker.start(ingest::parse_endpoint(config->config.endpoint));
    b->endpoint = b->broker.endpoint().str();
    *out = b.release();
  });
}

const char* evf_broker_endpoint(const evf_broker* broker) { return broker ? broker->endpoint.c_str() : ""; }

void evf_broker_free(evf_broker* broker) { delete broker; }

evf_status evf_model_load(const char* path, evf_model** out) {
  if (!path || !out) return fail(EVF_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorCode::ArtifactError, std::string("cannot read ") + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    auto m = std::make_unique<evf_model>();
    m->artifact = models::parse_artifact(ss.str());
    m->kind = m->artifact.kind();
    *out = m.release();
  });
}

void evf_model_free(evf_model* model) { delete model; }

const char* evf_model_kind(const evf_model* model) { return model ? model->kind.c_str() : ""; }

size_t evf_model_feature_count(const evf_model* model) {
  if (!model) return 0;
  return std::visit([](const auto& m) { return m.standardizer.feature_count(); }, model->artifact.model);
}

evf_status evf_model_predict(const evf_model* model, const double* x, size_t n, double* gamma_hat) {
  if (!model || !x || !gamma_hat) return fail(EVF_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *gamma_hat = model->artifact.predict(std::span<const double>(x, n)); });
}

evf_status evf_dataset_load(const char* path, evf_dataset** out) {
  if (!path || !out) return fail(EVF_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorCode::CorruptDataset, std::string("cannot read ") + path);
    auto d = std::make_unique<evf_dataset>();
    d->dataset = features::read_dataset_csv(is);
    *out = d.release();
  });
}

void evf_dataset_free(evf_dataset* dataset) { delete dataset; }

size_t evf_dataset_size(const evf_dataset* dataset) { return dataset ? dataset->dataset.size() : 0; }

size_t evf_dataset_feature_count(const evf_dataset* dataset) {
  return dataset ? dataset->dataset.feature_count() : 0;
}

evf_status evf_dataset_sample(const evf_dataset* dataset, size_t i, double* x, double* gamma) {
  if (!dataset || !x || !gamma) return fail(EVF_E_INVALID_ARGUMENT, "null argument");
  if (i >= dataset->dataset.size()) return fail(EVF_E_INVALID_ARGUMENT, "sample index out of range");
  const auto& s = dataset->dataset[i];
  std::copy(s.x.begin(), s.x.end(), x);
  *gamma = s.gamma;
  return EVF_OK;
}

}  // extern "C"

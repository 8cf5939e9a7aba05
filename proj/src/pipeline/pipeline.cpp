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

#include "evfleet/pipeline/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "evfleet/error.hpp"
#include "evfleet/ingest/recorder.hpp"
#include "evfleet/models/linear.hpp"
#include "evfleet/pipeline/scatter.hpp"
#include "evfleet/store/store.hpp"
#include "evfleet/util/text.hpp"

namespace evfleet::pipeline {
namespace fs = std::filesystem;

namespace {

[[noreturn]] void usage(const std::string& msg) { throw Error(ErrorCode::UsageError, msg); }

std::int64_t need_int(std::string_view key, std::string_view value) {
  const auto n = parse_int64(value);
  if (!n) usage(std::string(key) + ": not an integer: '" + std::string(value) + "'");
  return *n;
}

double need_double(std::string_view key, std::string_view value) {
  const auto d = parse_double(value);
  if (!d) usage(std::string(key) + ": not a number: '" + std::string(value) + "'");
  return *d;
}

std::vector<std::string> comma_list(std::string_view value) {
  std::vector<std::string> out;
  for (auto item : split(value, ',')) {
    item = trim(item);
    if (!item.empty()) out.emplace_back(item);
  }
  return out;
}

std::string read_text(const fs::path& path, ErrorCode missing) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(missing, "cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return std::move(ss).str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  os << text;
  os.close();
  if (!os) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

features::Dataset load_dataset(const PipelineConfig& config) {
  const auto path = config.artifacts() / kDatasetFile;
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::CorruptDataset, "cannot read " + path.string() + " (run extract first)");
  return features::read_dataset_csv(is, config.features);
}

std::vector<ModelKind> kinds_of(ModelKind kind) {
  if (kind == ModelKind::Both) return {ModelKind::Linear, ModelKind::Mlp};
  return {kind};
}

models::ModelArtifact load_model(const PipelineConfig& config, ModelKind kind) {
  const auto path = config.artifacts() / model_file(kind);
  return models::parse_artifact(read_text(path, ErrorCode::ArtifactError));
}

void require_root(const PipelineConfig& config) {
  if (config.root.empty()) usage(std::string("no store root: pass --root or set ") + kRootEnvVar);
}

}  // namespace

std::string_view model_kind_name(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::Linear: return "linear";
    case ModelKind::Mlp: return "mlp";
    case ModelKind::Both: return "both";
  }
  return "both";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "linear") return ModelKind::Linear;
  if (text == "mlp") return ModelKind::Mlp;
  if (text == "both") return ModelKind::Both;
  usage("model kind must be linear, mlp or both, got '" + std::string(text) + "'");
}

void PipelineConfig::sync_seeds() {
  fleet.seed = seed;
  train.seed = seed;
}

fs::path PipelineConfig::artifacts() const { return out_dir.empty() ? root / "_artifacts" : out_dir; }

void PipelineConfig::validate() const {
  synthfleet::validate(fleet);
  train.validate();
  features.validate();
  if (!(k_aging > 0.0) || !std::isfinite(k_aging)) usage("k_aging must be a positive number");
  if (!(speedup > 0.0)) usage("speedup must be positive");
  ingest::parse_endpoint(endpoint);
}

void apply_setting(PipelineConfig& c, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "seed") {
    c.seed = static_cast<std::uint64_t>(need_int(key, value));
    c.sync_seeds();
  } else if (key == "vehicles") {
    c.fleet.n_vehicles = static_cast<int>(need_int(key, value));
  } else if (key == "trips_per_vehicle") {
    c.fleet.trips_per_vehicle = static_cast<int>(need_int(key, value));
  } else if (key == "aging_map" || key == "aging") {
    c.fleet.aging = synthfleet::parse_aging_map(value);
  } else if (key == "min_trip_minutes") {
    c.fleet.min_trip_minutes = need_double(key, value);
  } else if (key == "max_trip_minutes") {
    c.fleet.max_trip_minutes = need_double(key, value);
  } else if (key == "root") {
    c.root = std::string(value);
  } else if (key == "out_dir") {
    c.out_dir = std::string(value);
  } else if (key == "endpoint") {
    c.endpoint = std::string(value);
  } else if (key == "validation_vehicles") {
    c.validation_vehicles = comma_list(value);
  } else if (key == "epochs") {
    c.train.epochs = static_cast<int>(need_int(key, value));
  } else if (key == "batch_size") {
    const auto n = need_int(key, value);
    if (n <= 0) usage("batch_size must be positive");
    c.train.batch_size = static_cast<std::size_t>(n);
  } else if (key == "lr") {
    c.train.learning_rate = need_double(key, value);
  } else if (key == "hidden_widths") {
    std::vector<std::size_t> widths;
    for (const auto& w : comma_list(value)) {
      const auto n = need_int(key, w);
      if (n <= 0) usage("hidden widths must be positive");
      widths.push_back(static_cast<std::size_t>(n));
    }
    if (widths.size() != models::kHiddenLayers) usage("hidden_widths must list exactly 5 layer widths");
    c.train.hidden_widths = widths;
  } else if (key == "k_aging") {
    c.k_aging = need_double(key, value);
  } else if (key == "speedup") {
    c.speedup = need_double(key, value);
  } else if (key == "t_sec") {
    c.features.section_ms = static_cast<std::int64_t>(std::llround(need_double(key, value) * 1000.0));
  } else if (key == "t_agg") {
    c.features.agg_ms = static_cast<std::int64_t>(std::llround(need_double(key, value) * 1000.0));
  } else if (key == "model_kind") {
    c.model_kind = parse_model_kind(value);
  } else {
    usage("unknown setting '" + std::string(key) + "'");
  }
}

void apply_config_text(PipelineConfig& config, std::string_view text) {
  int line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    auto line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) usage("config line " + std::to_string(line_no) + ": expected key = value");
    auto key = std::string(trim(line.substr(0, eq)));
    std::replace(key.begin(), key.end(), '-', '_');
    apply_setting(config, key, line.substr(eq + 1));
  }
}

std::string to_text(const PipelineConfig& c) {
  std::ostringstream os;
  auto join = [](const auto& items) {
    std::string s;
    for (const auto& i : items) {
      if (!s.empty()) s += ',';
      if constexpr (std::is_same_v<std::decay_t<decltype(i)>, std::string>) {
        s += i;
      } else {
        s += std::to_string(i);
      }
    }
    return s;
  };
  std::string aging;
  for (const auto& [id, f] : c.fleet.aging) aging += (aging.empty() ? "" : ",") + id + "=" + format_double(f);
  os << "seed = " << c.seed << '\n'
     << "vehicles = " << c.fleet.n_vehicles << '\n'
     << "trips_per_vehicle = " << c.fleet.trips_per_vehicle << '\n'
     << "aging_map = " << aging << '\n'
     << "min_trip_minutes = " << format_double(c.fleet.min_trip_minutes) << '\n'
     << "max_trip_minutes = " << format_double(c.fleet.max_trip_minutes) << '\n'
     << "root = " << c.root.string() << '\n'
     << "out_dir = " << c.artifacts().string() << '\n'
     << "endpoint = " << c.endpoint << '\n'
     << "validation_vehicles = " << join(validation_set(c)) << '\n'
     << "epochs = " << c.train.epochs << '\n'
     << "batch_size = " << c.train.batch_size << '\n'
     << "lr = " << format_double(c.train.learning_rate) << '\n'
     << "hidden_widths = " << join(c.train.hidden_widths) << '\n'
     << "k_aging = " << format_double(c.k_aging) << '\n'
     << "speedup = " << format_double(c.speedup) << '\n'
     << "t_sec = " << format_double(static_cast<double>(c.features.section_ms) / 1000.0) << '\n'
     << "t_agg = " << format_double(static_cast<double>(c.features.agg_ms) / 1000.0) << '\n'
     << "model_kind = " << model_kind_name(c.model_kind) << '\n';
  return os.str();
}

std::set<std::string> aged_vehicles(const PipelineConfig& config) {
  std::set<std::string> out;
  for (const auto& [id, f] : config.fleet.aging) {
    if (f != 1.0) out.insert(id);
  }
  return out;
}

std::set<std::string> validation_set(const PipelineConfig& config) {
  if (!config.validation_vehicles.empty()) {
    return {config.validation_vehicles.begin(), config.validation_vehicles.end()};
  }
  const auto aged = aged_vehicles(config);
  std::vector<std::string> fresh;
  for (int i = 0; i < config.fleet.n_vehicles; ++i) {
    auto id = synthfleet::vehicle_id(i, config.fleet.n_vehicles);
    if (!aged.contains(id)) fresh.push_back(std::move(id));
  }
  // 8/2 split by vehicle, at least one held out.
  const auto n_valid = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(0.2 * fresh.size())));
  std::set<std::string> out;
  for (std::size_t i = fresh.size() > n_valid ? fresh.size() - n_valid : 0; i < fresh.size(); ++i) out.insert(fresh[i]);
  return out;
}

Split split_dataset(const features::Dataset& ds, const PipelineConfig& config) {
  const auto valid = validation_set(config);
  const auto aged = aged_vehicles(config);
  std::set<std::string> train;
  for (const auto& v : ds.vehicles()) {
    if (!valid.contains(v) && !aged.contains(v)) train.insert(v);
  }
  return {ds.subset(train), ds.subset(valid)};
}

features::Dataset synth_dataset(const synthfleet::FleetConfig& fleet, const features::FeatureConfig& features,
                                features::DiscardCounts* discards) {
  features::DatasetBuilder builder(features);
  synthfleet::for_each_fleet_trip(fleet, [&builder](core::Trip&& t) { builder.add_trip(t); });
  if (discards) *discards = builder.discards();
  return std::move(builder).finish();
}

std::string model_file(ModelKind kind) { return "model_" + std::string(model_kind_name(kind)) + ".json"; }
std::string report_file(ModelKind kind) { return "eval_report_" + std::string(model_kind_name(kind)) + ".csv"; }
std::string predictions_file(ModelKind kind) {
  return "predictions_" + std::string(model_kind_name(kind)) + ".csv";
}
std::string scatter_file(ModelKind kind) { return "scatter_" + std::string(model_kind_name(kind)) + ".svg"; }
std::string loss_file() { return "train_loss_mlp.csv"; }

SynthSummary run_synth(const PipelineConfig& config) {
  require_root(config);
  synthfleet::validate(config.fleet);
  SynthSummary s;
  s.vehicles = static_cast<std::size_t>(config.fleet.n_vehicles);
  synthfleet::for_each_fleet_trip(config.fleet, [&](core::Trip&& t) {
    store::write_trip(config.root, t);
    ++s.trips;
  });
  return s;
}

ExtractSummary run_extract(const PipelineConfig& config) {
  require_root(config);
  config.features.validate();
  features::DatasetBuilder builder(config.features);
  ExtractSummary s;
  for (const auto& m : store::list_trips(config.root)) {
    builder.add_trip(store::read_trip(config.root, m.vehicle_id, m.trip_id));
    ++s.trips;
  }
  s.discards = builder.discards();
  const auto ds = std::move(builder).finish();
  s.sections = ds.size();
  write_text(config.artifacts() / kDatasetFile, features::dataset_csv(ds));

  std::ostringstream os;
  os << "trips = " << s.trips << '\n'
     << "sections = " << s.sections << '\n'
     << "trips_too_short = " << s.discards.trips_too_short << '\n'
     << "trips_faulty = " << s.discards.trips_faulty << '\n'
     << "trips_structural = " << s.discards.trips_structural << '\n'
     << "sections_empty_window = " << s.discards.sections_empty_window << '\n'
     << "sections_zero_distance = " << s.discards.sections_zero_distance << '\n';
  write_text(config.artifacts() / kExtractSummaryFile, os.str());
  return s;
}

TrainSummary run_train(const PipelineConfig& config) {
  config.train.validate();
  const auto ds = load_dataset(config);
  const auto split = split_dataset(ds, config);
  if (split.train.empty()) throw Error(ErrorCode::FitError, "no training samples after the vehicle split");
  const auto fingerprint = models::dataset_fingerprint(split.train);

  TrainSummary s;
  s.train_samples = split.train.size();
  for (const auto kind : kinds_of(config.model_kind)) {
    models::ModelArtifact a;
    a.dataset_fingerprint = fingerprint;
    a.n_train_samples = split.train.size();
    if (kind == ModelKind::Linear) {
      a.model = models::fit_linear(split.train);
    } else {
      auto result = models::train_mlp(split.train, config.train);
      a.model = std::move(result.model);
      a.train_config = config.train;
      std::string loss = "epoch,loss\n";
      for (std::size_t e = 0; e < result.loss_history.size(); ++e) {
        loss += std::to_string(e + 1) + ',';
        append_double(loss, result.loss_history[e]);
        loss += '\n';
      }
      write_text(config.artifacts() / loss_file(), loss);
    }
    write_text(config.artifacts() / model_file(kind), models::to_text(a));
    s.written.push_back(model_file(kind));
  }
  return s;
}

EvalSummary run_eval(const PipelineConfig& config) {
  const auto ds = load_dataset(config);
  const auto valid = split_dataset(ds, config).valid;
  if (valid.empty()) throw Error(ErrorCode::EvalError, "validation set is empty");

  std::vector<double> gamma;
  for (const auto& s : valid.samples()) gamma.push_back(s.gamma);

  EvalSummary out;
  for (const auto kind : kinds_of(config.model_kind)) {
    const auto artifact = load_model(config, kind);
    const auto gamma_hat = models::predict_all(artifact.predictor(), valid);
    const auto report = models::evaluate_pairs(gamma, gamma_hat);
    const std::string name(model_kind_name(kind));
    write_text(config.artifacts() / report_file(kind), models::eval_report_csv(name, report));

    std::string pred = "vehicle_id,trip_id,section_index,gamma,gamma_hat\n";
    for (std::size_t i = 0; i < valid.size(); ++i) {
      const auto& s = valid[i];
      pred += s.vehicle_id + ',' + s.trip_id + ',' + std::to_string(s.section_index) + ',';
      append_double(pred, s.gamma);
      pred += ',';
      append_double(pred, gamma_hat[i]);
      pred += '\n';
    }
    write_text(config.artifacts() / predictions_file(kind), pred);
    write_scatter(config.artifacts() / scatter_file(kind), gamma, gamma_hat,
                  (kind == ModelKind::Linear ? "Model A (linear)" : "Model B (MLP)"));
    out.reports.emplace_back(name, report);
  }
  return out;
}

AgingSummary run_aging(const PipelineConfig& config) {
  const auto kind = config.model_kind == ModelKind::Linear ? ModelKind::Linear : ModelKind::Mlp;
  const auto artifact = load_model(config, kind);
  const auto predict = artifact.predictor();
  const auto ds = load_dataset(config);
  const auto split = split_dataset(ds, config);
  const auto aged = aged_vehicles(config);

  std::set<std::string> baseline_vehicles;
  for (const auto& v : split.valid.vehicles()) {
    if (!aged.contains(v)) baseline_vehicles.insert(v);
  }
  AgingSummary out;
  out.baseline = agingwatch::build_baseline(predict, ds.subset(baseline_vehicles), models::model_fingerprint(artifact));

  const auto train_vehicles = split.train.vehicles();
  for (const auto& v : ds.vehicles()) {
    if (std::find(train_vehicles.begin(), train_vehicles.end(), v) != train_vehicles.end()) continue;
    out.verdicts.push_back(agingwatch::assess_vehicle(predict, out.baseline, ds.subset({v}), config.k_aging));
  }
  write_text(config.artifacts() / kVerdictsFile, agingwatch::verdicts_csv(out.verdicts));
  std::string b = "model_fingerprint = " + out.baseline.model_fingerprint + "\nbaseline_mae = ";
  append_double(b, out.baseline.baseline_mae);
  b += "\nbaseline_std = ";
  append_double(b, out.baseline.baseline_std);
  b += "\nn_samples = " + std::to_string(out.baseline.n_samples) + "\nk = ";
  append_double(b, config.k_aging);
  b += '\n';
  write_text(config.artifacts() / kBaselineFile, b);
  return out;
}

ReplaySummary run_replay(const PipelineConfig& config) {
  require_root(config);
  auto endpoint = ingest::parse_endpoint(config.endpoint);
  std::optional<ingest::Broker> local;
  if (endpoint.port == 0) {
    local.emplace();
    local->start(endpoint);
    endpoint = local->endpoint();
  }

  const auto recorded_root = config.artifacts() / "recorded";
  ReplaySummary s;
  const auto manifests = store::list_trips(config.root);
  {
    ingest::Recorder recorder(endpoint, ingest::TopicFilter::parse("fleet/#"),
                              [&recorded_root](const core::Trip& t) { store::write_trip(recorded_root, t); });
    auto gateway = ingest::Client::connect(endpoint, "gateway");
    for (const auto& m : manifests) {
      const auto trip = store::read_trip(config.root, m.vehicle_id, m.trip_id);
      s.published += ingest::replay_trip(gateway, trip, config.speedup);
      ++s.trips;
    }
    gateway.ping();
    gateway.disconnect();
    if (!recorder.wait_for_samples(s.published, std::chrono::seconds(120))) {
      throw Error(ErrorCode::ReplayAborted, "recorder received " + std::to_string(recorder.stats().samples_received) +
                                                " of " + std::to_string(s.published) + " samples");
    }
    recorder.stop();
    const auto st = recorder.stats();
    s.dropped = st.dropped_data;
    if (st.write_failures > 0) throw Error(ErrorCode::IoError, "recorder could not store every trip");
  }
  if (local) local->stop();

  for (const auto& m : manifests) {
    const auto src = store::read_trip(config.root, m.vehicle_id, m.trip_id);
    std::error_code ec;
    if (!fs::exists(store::trip_dir(recorded_root, m.vehicle_id, m.trip_id), ec)) {
      ++s.mismatched_trips;
      continue;
    }
    if (!core::bitwise_equal(src, store::read_trip(recorded_root, m.vehicle_id, m.trip_id))) ++s.mismatched_trips;
  }
  s.recorded_trips = store::list_trips(recorded_root).size();
  return s;
}

void run_broker(const PipelineConfig& config, const std::atomic<bool>& stop,
                const std::function<void(const std::string&)>& on_ready) {
  ingest::Broker broker;
  broker.start(ingest::parse_endpoint(config.endpoint));
  if (on_ready) on_ready(broker.endpoint().str());
  while (!stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  broker.stop();
}

}  // namespace evfleet::pipeline

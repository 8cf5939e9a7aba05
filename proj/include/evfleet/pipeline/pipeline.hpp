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

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "evfleet/agingwatch/agingwatch.hpp"
#include "evfleet/features/features.hpp"
#include "evfleet/models/artifact.hpp"
#include "evfleet/models/metrics.hpp"
#include "evfleet/models/mlp.hpp"
#include "evfleet/synthfleet/synthfleet.hpp"

namespace evfleet::pipeline {

/// Environment variable naming the store root when no flag or config sets it.
inline constexpr const char* kRootEnvVar = "EVFLEET_ROOT";

enum class ModelKind { Linear, Mlp, Both };

std::string_view model_kind_name(ModelKind kind) noexcept;
/// "linear", "mlp" or "both"; throws Error(UsageError).
ModelKind parse_model_kind(std::string_view text);

struct PipelineConfig {
  std::uint64_t seed = 7;
  synthfleet::FleetConfig fleet;
  std::filesystem::path root;     // trip store
  std::filesystem::path out_dir;  // artifacts; empty means <root>/_artifacts
  std::string endpoint = "127.0.0.1:7883";
  /// Empty means the last 20% of the fresh vehicles (at least one).
  std::vector<std::string> validation_vehicles;
  models::TrainConfig train;
  double k_aging = agingwatch::kDefaultK;
  features::FeatureConfig features;
  ModelKind model_kind = ModelKind::Both;
  double speedup = std::numeric_limits<double>::infinity();  // flat out

  /// The fleet and training seeds follow `seed`.
  void sync_seeds();
  std::filesystem::path artifacts() const;
  /// Throws Error(UsageError) or the owning module's config error.
  void validate() const;
};

/// Applies "key = value" lines (keys as the long flags with '_' for '-':
/// seed, vehicles, trips_per_vehicle, aging_map, min_trip_minutes,
/// max_trip_minutes, root, out_dir, endpoint, validation_vehicles, epochs,
/// batch_size, lr, hidden_widths, k_aging, speedup, t_sec, t_agg,
/// model_kind). '#' starts a comment. Throws Error(UsageError).
void apply_config_text(PipelineConfig& config, std::string_view text);
void apply_setting(PipelineConfig& config, std::string_view key, std::string_view value);
std::string to_text(const PipelineConfig& config);

/// Validation vehicles after defaulting.
std::set<std::string> validation_set(const PipelineConfig& config);
/// Vehicles listed in the fleet's aging map with a factor other than 1.
std::set<std::string> aged_vehicles(const PipelineConfig& config);

/// Training vehicles: fresh and not held out. Validation: as configured.
struct Split {
  features::Dataset train;
  features::Dataset valid;
};
Split split_dataset(const features::Dataset& ds, const PipelineConfig& config);

/// Generates the fleet and extracts its dataset in memory.
features::Dataset synth_dataset(const synthfleet::FleetConfig& fleet, const features::FeatureConfig& features = {},
                                features::DiscardCounts* discards = nullptr);

// Artifact file names inside PipelineConfig::artifacts().
inline constexpr const char* kDatasetFile = "dataset.csv";
inline constexpr const char* kExtractSummaryFile = "extract_summary.txt";
inline constexpr const char* kVerdictsFile = "aging_verdicts.csv";
inline constexpr const char* kBaselineFile = "aging_baseline.txt";
std::string model_file(ModelKind kind);        // model_linear.json / model_mlp.json
std::string report_file(ModelKind kind);       // eval_report_<kind>.csv
std::string predictions_file(ModelKind kind);  // predictions_<kind>.csv
std::string scatter_file(ModelKind kind);      // scatter_<kind>.svg
std::string loss_file();                       // train_loss_mlp.csv

struct SynthSummary {
  std::size_t trips = 0;
  std::size_t vehicles = 0;
};
struct ExtractSummary {
  std::size_t trips = 0;
  std::size_t sections = 0;
  features::DiscardCounts discards;
};
struct TrainSummary {
  std::vector<std::string> written;
  std::size_t train_samples = 0;
};
struct EvalSummary {
  std::vector<std::pair<std::string, models::EvalReport>> reports;
};
struct AgingSummary {
  agingwatch::ResidualBaseline baseline;
  std::vector<agingwatch::AgingVerdict> verdicts;
};
struct ReplaySummary {
  std::size_t trips = 0;
  std::size_t published = 0;
  std::size_t recorded_trips = 0;
  std::size_t mismatched_trips = 0;
  std::uint64_t dropped = 0;
};

/// Writes the fleet's trips into the store.
SynthSummary run_synth(const PipelineConfig& config);
/// Reads every stored trip and writes dataset.csv.
ExtractSummary run_extract(const PipelineConfig& config);
/// Fits the requested models on the training split of dataset.csv.
TrainSummary run_train(const PipelineConfig& config);
/// Evaluates stored models on the validation split: report CSV,
/// predictions CSV and scatter SVG per model.
EvalSummary run_eval(const PipelineConfig& config);
/// Residual baseline on fresh validation vehicles, then one verdict per
/// vehicle outside the training set.
AgingSummary run_aging(const PipelineConfig& config);
/// Streams every stored trip through a broker to a recorder writing into
/// <artifacts>/recorded and compares the result with the source. Uses the
/// broker at config.endpoint, or an in-process one when its port is 0.
ReplaySummary run_replay(const PipelineConfig& config);
/// Serves until `stop` becomes true.
void run_broker(const PipelineConfig& config, const std::atomic<bool>& stop,
                const std::function<void(const std::string&)>& on_ready = {});

}  // namespace evfleet::pipeline

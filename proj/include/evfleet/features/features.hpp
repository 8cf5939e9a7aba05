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
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "evfleet/core/trip.hpp"

namespace evfleet::features {

/// Sectioning and aggregation periods. Defaults: 6 min sections, 1 min means.
struct FeatureConfig {
  std::int64_t section_ms = 360'000;
  std::int64_t agg_ms = 60'000;
  /// Minimum share of the nominal 10 Hz samples a (signal, sub-window) needs.
  double min_fill = 0.5;

  std::size_t windows_per_section() const noexcept { return static_cast<std::size_t>(section_ms / agg_ms); }
  std::size_t feature_count() const noexcept { return core::kSignalCount * windows_per_section(); }

  /// Throws Error(ConfigError) unless agg_ms > 0 divides section_ms and is a
  /// multiple of the sample period.
  void validate() const;
};

struct Window {
  std::int64_t t0_ms = 0;
  std::int64_t t1_ms = 0;

  bool operator==(const Window&) const = default;
};

enum class DiscardReason { TooShort, Faulty, Structural, EmptyWindow, ZeroDistance };

std::string_view reason_name(DiscardReason reason) noexcept;

struct Discard {
  DiscardReason reason;
  std::string detail;
};

/// Consecutive non-overlapping windows anchored at the trip start; a trailing
/// remainder shorter than one section is dropped.
std::vector<Window> section_trip(const core::Trip& trip, const FeatureConfig& config = {});

/// Index of the feature for (signal, sub-window): signal-major, time-minor.
constexpr std::size_t feature_index(std::size_t signal, std::size_t window, std::size_t windows_per_section) noexcept {
  return signal * windows_per_section + window;
}

/// Per-signal means over each sub-window [t0 + w*agg, t0 + (w+1)*agg).
/// Discard(EmptyWindow) when any (signal, sub-window) holds fewer than
/// min_fill of its nominal samples.
std::variant<std::vector<double>, Discard> aggregate_features(const core::Trip& trip, std::int64_t t0_ms,
                                                              std::int64_t t1_ms, const FeatureConfig& config = {});

/// Gamma = (soc(t1) - soc(t0)) / (odo(t1) - odo(t0)) with both traces
/// linearly interpolated; negative while the battery discharges.
/// Discard(ZeroDistance) when the odometer does not advance.
std::variant<double, Discard> label_section(const core::Trip& trip, std::int64_t t0_ms, std::int64_t t1_ms);

struct TripSection {
  std::string vehicle_id;
  std::string trip_id;
  std::size_t section_index = 0;
  std::vector<double> x;
  double gamma = 0.0;
  std::int64_t t0_ms = 0;
  std::int64_t t1_ms = 0;

  bool operator==(const TripSection&) const = default;
};

/// Samples sorted by (vehicle_id, trip_id, section_index), unique on
/// (trip_id, section_index), all with the same feature count.
class Dataset {
 public:
  Dataset() = default;

  /// Sorts the samples; throws Error(StructuralError) on duplicates,
  /// mismatched feature counts, or non-finite values.
  explicit Dataset(std::vector<TripSection> samples);

  std::span<const TripSection> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  std::size_t feature_count() const noexcept { return samples_.empty() ? 0 : samples_.front().x.size(); }
  const TripSection& operator[](std::size_t i) const { return samples_[i]; }

  /// Distinct vehicle ids in order.
  std::vector<std::string> vehicles() const;
  /// Positions of one vehicle's samples (empty if absent).
  std::span<const std::size_t> indices_of(const std::string& vehicle_id) const;

  /// Samples of the given vehicles only.
  Dataset subset(const std::set<std::string>& vehicles) const;

  bool operator==(const Dataset& other) const { return samples_ == other.samples_; }

 private:
  std::vector<TripSection> samples_;
  std::map<std::string, std::vector<std::size_t>> by_vehicle_;
};

struct DiscardCounts {
  std::size_t trips_too_short = 0;
  std::size_t trips_faulty = 0;
  std::size_t trips_structural = 0;
  std::size_t sections_empty_window = 0;
  std::size_t sections_zero_distance = 0;

  bool operator==(const DiscardCounts&) const = default;
};

/// Incremental validate -> section -> aggregate -> label pipeline. Trips can
/// be added one at a time so a fleet never has to sit in memory at once.
class DatasetBuilder {
 public:
  explicit DatasetBuilder(FeatureConfig config = {},
                          const core::SignalCatalog& catalog = core::SignalCatalog::defaults());

  /// Returns the number of sections kept from this trip.
  std::size_t add_trip(const core::Trip& trip);

  const DiscardCounts& discards() const noexcept { return discards_; }
  std::size_t trips_seen() const noexcept { return trips_seen_; }

  Dataset finish() &&;

 private:
  FeatureConfig config_;
  core::SignalCatalog catalog_;
  std::vector<TripSection> samples_;
  DiscardCounts discards_;
  std::size_t trips_seen_ = 0;
};

Dataset build_dataset(std::span<const core::Trip> trips, const FeatureConfig& config = {},
                      DiscardCounts* discards = nullptr);

/// Partition by vehicle. Throws Error(BadSplit) when a requested validation
/// vehicle has no samples.
std::pair<Dataset, Dataset> split_by_vehicle(const Dataset& ds, const std::set<std::string>& validation_vehicles);

/// CSV with header vehicle_id,trip_id,section_index,x1..xN,gamma; numbers use
/// shortest round-trip decimals.
void write_dataset_csv(const Dataset& ds, std::ostream& os);
std::string dataset_csv(const Dataset& ds);

/// Inverse of write_dataset_csv. Window times are restored relative to the
/// trip start (section_index * section_ms). Throws Error(CorruptDataset)
/// on malformed input.
Dataset read_dataset_csv(std::istream& is, const FeatureConfig& config = {});

}  // namespace evfleet::features

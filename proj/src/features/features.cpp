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

#include "evfleet/features/features.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "evfleet/error.hpp"

namespace evfleet::features {
namespace {

using core::Series;

auto first_at_or_after(const Series& s, std::int64_t t) {
  return std::lower_bound(s.begin(), s.end(), t, [](const core::TimedValue& p, std::int64_t v) { return p.t_ms < v; });
}

// Piecewise-linear trace value; the end segments extend past the samples.
double interpolate(const Series& trace, std::int64_t t) {
  if (trace.size() == 1) return trace.front().value;
  auto hi = first_at_or_after(trace, t);
  if (hi == trace.begin()) ++hi;
  if (hi == trace.end()) --hi;
  const auto lo = hi - 1;
  const double w = static_cast<double>(t - lo->t_ms) / static_cast<double>(hi->t_ms - lo->t_ms);
  return lo->value + w * (hi->value - lo->value);
}

}  // namespace

void FeatureConfig::validate() const {
  if (agg_ms <= 0 || section_ms <= 0 || section_ms % agg_ms != 0 || agg_ms % core::kSamplePeriodMs != 0) {
    throw Error(ErrorCode::ConfigError, "t_agg must be a positive multiple of 100 ms dividing t_sec");
  }
  if (!(min_fill >= 0.0 && min_fill <= 1.0)) throw Error(ErrorCode::ConfigError, "min_fill must lie in [0, 1]");
}

std::string_view reason_name(DiscardReason reason) noexcept {
  switch (reason) {
    case DiscardReason::TooShort: return "TooShort";
    case DiscardReason::Faulty: return "Faulty";
    case DiscardReason::Structural: return "Structural";
    case DiscardReason::EmptyWindow: return "EmptyWindow";
    case DiscardReason::ZeroDistance: return "ZeroDistance";
  }
  return "";
}

std::vector<Window> section_trip(const core::Trip& trip, const FeatureConfig& config) {
  config.validate();
  std::vector<Window> out;
  const auto count = std::max<std::int64_t>(0, trip.duration_ms()) / config.section_ms;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    const auto t0 = trip.start_ms + i * config.section_ms;
    out.push_back({t0, t0 + config.section_ms});
  }
  return out;
}

std::variant<std::vector<double>, Discard> aggregate_features(const core::Trip& trip, std::int64_t t0_ms,
                                                              std::int64_t t1_ms, const FeatureConfig& config) {
  config.validate();
  if (t1_ms - t0_ms != config.section_ms) {
    throw Error(ErrorCode::ConfigError, "window length differs from the configured section length");
  }
  const auto windows = config.windows_per_section();
  const auto nominal = config.agg_ms / core::kSamplePeriodMs;
  const double needed = config.min_fill * static_cast<double>(nominal);

  std::vector<double> x(config.feature_count());
  for (std::size_t s = 0; s < core::kSignalCount; ++s) {
    const auto& series = trip.series[s];
    auto it = first_at_or_after(series, t0_ms);
    for (std::size_t w = 0; w < windows; ++w) {
      const auto end_t = t0_ms + static_cast<std::int64_t>(w + 1) * config.agg_ms;
      double sum = 0.0;
      std::size_t n = 0;
      for (; it != series.end() && it->t_ms < end_t; ++it) {
        sum += it->value;
        ++n;
      }
      if (static_cast<double>(n) < needed || n == 0) {
        return Discard{DiscardReason::EmptyWindow,
                       std::string(core::signal_name(core::signal_at(s))) + " sub-window " + std::to_string(w)};
      }
      x[feature_index(s, w, windows)] = sum / static_cast<double>(n);
    }
  }
  return x;
}

std::variant<double, Discard> label_section(const core::Trip& trip, std::int64_t t0_ms, std::int64_t t1_ms) {
  const double soc_start = interpolate(trip.soc_trace, t0_ms);
  const double soc_end = interpolate(trip.soc_trace, t1_ms);
  const double km_start = interpolate(trip.odo_trace, t0_ms);
  const double km_end = interpolate(trip.odo_trace, t1_ms);
  if (km_end == km_start) return Discard{DiscardReason::ZeroDistance, trip.trip_id};
  return (soc_end - soc_start) / (km_end - km_start);
}

Dataset::Dataset(std::vector<TripSection> samples) : samples_(std::move(samples)) {
  std::sort(samples_.begin(), samples_.end(), [](const TripSection& a, const TripSection& b) {
    return std::tie(a.vehicle_id, a.trip_id, a.section_index) < std::tie(b.vehicle_id, b.trip_id, b.section_index);
  });
  const auto width = feature_count();
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (s.x.size() != width) throw Error(ErrorCode::StructuralError, "samples disagree on the feature count");
    if (!std::isfinite(s.gamma) || !std::all_of(s.x.begin(), s.x.end(), [](double v) { return std::isfinite(v); })) {
      throw Error(ErrorCode::StructuralError, "non-finite value in section " + s.trip_id);
    }
    if (i > 0 && samples_[i - 1].trip_id == s.trip_id && samples_[i - 1].section_index == s.section_index) {
      throw Error(ErrorCode::StructuralError,
                  "duplicate section " + s.trip_id + "#" + std::to_string(s.section_index));
    }
    by_vehicle_[s.vehicle_id].push_back(i);
  }
  // Same trip id under two vehicles would not be adjacent after sorting.
  std::set<std::pair<std::string, std::size_t>> keys;
  for (const auto& s : samples_) {
    if (!keys.emplace(s.trip_id, s.section_index).second) {
      throw Error(ErrorCode::StructuralError, "duplicate section " + s.trip_id);
    }
  }
}

std::vector<std::string> Dataset::vehicles() const {
  std::vector<std::string> out;
  out.reserve(by_vehicle_.size());
  for (const auto& [id, idx] : by_vehicle_) out.push_back(id);
  return out;
}

std::span<const std::size_t> Dataset::indices_of(const std::string& vehicle_id) const {
  const auto it = by_vehicle_.find(vehicle_id);
  if (it == by_vehicle_.end()) return {};
  return it->second;
}

Dataset Dataset::subset(const std::set<std::string>& vehicles) const {
  std::vector<TripSection> out;
  for (const auto& s : samples_) {
    if (vehicles.contains(s.vehicle_id)) out.push_back(s);
  }
  return Dataset(std::move(out));
}

DatasetBuilder::DatasetBuilder(FeatureConfig config, const core::SignalCatalog& catalog)
    : config_(config), catalog_(catalog) {
  config_.validate();
}

std::size_t DatasetBuilder::add_trip(const core::Trip& trip) {
  ++trips_seen_;
  core::TripVerdict verdict;
  try {
    verdict = core::validate_trip(trip, catalog_, config_.section_ms);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::StructuralError) throw;
    ++discards_.trips_structural;
    return 0;
  }
  if (verdict.status == core::TripStatus::TooShort) {
    ++discards_.trips_too_short;
    return 0;
  }
  if (verdict.status == core::TripStatus::Faulty) {
    ++discards_.trips_faulty;
    return 0;
  }

  std::size_t kept = 0;
  const auto windows = section_trip(trip, config_);
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto [t0, t1] = windows[i];
    auto features = aggregate_features(trip, t0, t1, config_);
    if (std::holds_alternative<Discard>(features)) {
      ++discards_.sections_empty_window;
      continue;
    }
    const auto label = label_section(trip, t0, t1);
    if (std::holds_alternative<Discard>(label)) {
      ++discards_.sections_zero_distance;
      continue;
    }
    samples_.push_back(TripSection{trip.vehicle_id, trip.trip_id, i,
                                   std::move(std::get<std::vector<double>>(features)), std::get<double>(label), t0,
                                   t1});
    ++kept;
  }
  return kept;
}

Dataset DatasetBuilder::finish() && { return Dataset(std::move(samples_)); }

Dataset build_dataset(std::span<const core::Trip> trips, const FeatureConfig& config, DiscardCounts* discards) {
  DatasetBuilder builder(config);
  for (const auto& trip : trips) builder.add_trip(trip);
  if (discards) *discards = builder.discards();
  return std::move(builder).finish();
}

std::pair<Dataset, Dataset> split_by_vehicle(const Dataset& ds, const std::set<std::string>& validation_vehicles) {
  for (const auto& id : validation_vehicles) {
    if (ds.indices_of(id).empty()) throw Error(ErrorCode::BadSplit, "vehicle " + id + " has no samples");
  }
  std::vector<TripSection> train;
  std::vector<TripSection> valid;
  for (const auto& s : ds.samples()) {
    (validation_vehicles.contains(s.vehicle_id) ? valid : train).push_back(s);
  }
  return {Dataset(std::move(train)), Dataset(std::move(valid))};
}

}  // namespace evfleet::features

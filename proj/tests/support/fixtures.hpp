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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "evfleet/core/catalog.hpp"
#include "evfleet/core/trip.hpp"
#include "evfleet/error.hpp"
#include "evfleet/features/features.hpp"
#include "evfleet/util/rng.hpp"
#include "temp_dir.hpp"

namespace evfleet::testing {

// Qualified name of the evfleet::Error thrown by f, or "none".
template <typename F>
std::string error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return qualified_error_name(e.code());
  }
  return "none";
}

// Clean 10 Hz trip at constant cruise: every signal holds a plausible
// constant, the odometer grows at speed_mps and SOC drains linearly.
inline core::Trip cruise_trip(const std::string& vehicle_id, std::int64_t start_ms, std::int64_t n_samples,
                              double speed_mps = 12.0, double soc0 = 0.8, double soc_per_sample = 2e-6) {
  core::Trip trip;
  trip.vehicle_id = vehicle_id;
  trip.start_ms = start_ms;
  trip.end_ms = start_ms + n_samples * core::kSamplePeriodMs;
  trip.trip_id = core::make_trip_id(vehicle_id, start_ms);
  for (std::int64_t k = 0; k < n_samples; ++k) {
    const std::int64_t t = start_ms + k * core::kSamplePeriodMs;
    for (std::size_t s = 0; s < core::kSignalCount; ++s) {
      trip.series[s].push_back({t, 1.0 + static_cast<double>(s)});
    }
    trip.signal(core::SignalId::VehicleSpeed).back().value = speed_mps;
    trip.soc_trace.push_back({t, soc0 - soc_per_sample * static_cast<double>(k)});
    trip.odo_trace.push_back({t, 1000.0 + speed_mps * 0.1 * static_cast<double>(k) / 1000.0});
  }
  return trip;
}

inline std::int64_t samples_for_minutes(double minutes) {
  return static_cast<std::int64_t>(minutes * 600.0);
}

// n samples of `features` standard-normal inputs spread over `vehicles`
// vehicles, labelled by label(x). Every sample is its own trip.
inline features::Dataset synthetic_dataset(std::size_t n, std::size_t features, std::uint64_t seed,
                                           const std::function<double(std::span<const double>)>& label,
                                           std::size_t vehicles = 4, const std::string& prefix = "v") {
  Rng rng(seed);
  std::vector<features::TripSection> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    features::TripSection s;
    s.vehicle_id = prefix + std::to_string(i % vehicles);
    s.trip_id = core::make_trip_id(s.vehicle_id, static_cast<std::int64_t>(i) * 3'600'000);
    s.x.resize(features);
    for (auto& v : s.x) v = rng.normal();
    s.gamma = label(s.x);
    s.t0_ms = static_cast<std::int64_t>(i) * 3'600'000;
    s.t1_ms = s.t0_ms + 360'000;
    out.push_back(std::move(s));
  }
  return features::Dataset(std::move(out));
}

}  // namespace evfleet::testing

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

#include "evfleet/core/trip.hpp"

#include <bit>
#include <cmath>
#include <cstdio>

#include "evfleet/error.hpp"

namespace evfleet::core {
namespace {

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

bool bitwise_equal(const Series& a, const Series& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].t_ms != b[i].t_ms || !same_bits(a[i].value, b[i].value)) return false;
  }
  return true;
}

void check_series(const Trip& trip, const Series& s, std::string_view what) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].t_ms < trip.start_ms || s[i].t_ms > trip.end_ms) {
      throw Error(ErrorCode::StructuralError,
                  std::string(what) + ": timestamp outside trip bounds in " + trip.trip_id);
    }
    if (i > 0 && s[i].t_ms <= s[i - 1].t_ms) {
      throw Error(ErrorCode::StructuralError, std::string(what) + ": unordered timestamps in " + trip.trip_id);
    }
  }
}

}  // namespace

bool bitwise_equal(const Trip& a, const Trip& b) {
  if (a.trip_id != b.trip_id || a.vehicle_id != b.vehicle_id || a.start_ms != b.start_ms ||
      a.end_ms != b.end_ms) {
    return false;
  }
  if (!bitwise_equal(a.soc_trace, b.soc_trace) || !bitwise_equal(a.odo_trace, b.odo_trace)) return false;
  for (std::size_t i = 0; i < kSignalCount; ++i) {
    if (!bitwise_equal(a.series[i], b.series[i])) return false;
  }
  return true;
}

std::string make_trip_id(const std::string& vehicle_id, std::int64_t start_ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%013lld", static_cast<long long>(start_ms));
  return vehicle_id + "-" + buf;
}

std::string_view status_name(TripStatus status) noexcept {
  switch (status) {
    case TripStatus::Accepted: return "Accepted";
    case TripStatus::TooShort: return "TooShort";
    case TripStatus::Faulty: return "Faulty";
  }
  return "";
}

void check_structure(const Trip& trip) {
  if (trip.trip_id.empty() || trip.vehicle_id.empty()) {
    throw Error(ErrorCode::StructuralError, "trip and vehicle ids must be non-empty");
  }
  if (trip.start_ms >= trip.end_ms) {
    throw Error(ErrorCode::StructuralError, "start_ms must precede end_ms in " + trip.trip_id);
  }
  if (trip.soc_trace.empty() || trip.odo_trace.empty()) {
    throw Error(ErrorCode::StructuralError, "missing SOC or odometer trace in " + trip.trip_id);
  }
  check_series(trip, trip.soc_trace, "soc");
  check_series(trip, trip.odo_trace, "odo");
  for (std::size_t i = 0; i < kSignalCount; ++i) {
    check_series(trip, trip.series[i], signal_name(signal_at(i)));
  }
  for (std::size_t i = 0; i < trip.odo_trace.size(); ++i) {
    const double km = trip.odo_trace[i].value;
    if (km < 0.0 || (i > 0 && km < trip.odo_trace[i - 1].value)) {
      throw Error(ErrorCode::StructuralError, "odometer decreases or is negative in " + trip.trip_id);
    }
  }
  for (const auto& p : trip.soc_trace) {
    if (p.value < 0.0 || p.value > 1.0) {
      throw Error(ErrorCode::StructuralError, "SOC outside [0, 1] in " + trip.trip_id);
    }
  }
}

TripVerdict validate_trip(const Trip& trip, const SignalCatalog& catalog, std::int64_t min_duration_ms) {
  check_structure(trip);

  if (trip.duration_ms() < min_duration_ms) {
    return {TripStatus::TooShort, "duration " + std::to_string(trip.duration_ms()) + " ms"};
  }
  for (const auto* trace : {&trip.soc_trace, &trip.odo_trace}) {
    for (const auto& p : *trace) {
      if (!std::isfinite(p.value)) return {TripStatus::Faulty, "non-finite trace value"};
    }
  }

  const auto nominal = trip.duration_ms() / kSamplePeriodMs;
  for (const auto& entry : catalog.entries()) {
    const auto& s = trip.signal(entry.id);
    for (const auto& p : s) {
      if (!std::isfinite(p.value)) {
        return {TripStatus::Faulty, "non-finite " + std::string(entry.name())};
      }
      if (!entry.plausible(p.value)) {
        return {TripStatus::Faulty, "implausible " + std::string(entry.name())};
      }
    }
    const auto missing = nominal - static_cast<std::int64_t>(s.size());
    if (static_cast<double>(missing) > kMaxMissingFraction * static_cast<double>(nominal)) {
      return {TripStatus::Faulty, "missing samples in " + std::string(entry.name())};
    }
  }
  return {};
}

}  // namespace evfleet::core

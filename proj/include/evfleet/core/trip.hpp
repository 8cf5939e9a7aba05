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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "evfleet/core/catalog.hpp"

namespace evfleet::core {

/// Nominal telemetry period (10 Hz).
inline constexpr std::int64_t kSamplePeriodMs = 100;

struct TimedValue {
  std::int64_t t_ms = 0;
  double value = 0.0;

  bool operator==(const TimedValue&) const = default;
};

using Series = std::vector<TimedValue>;

/// One timestamped value of one catalog signal, as it travels over the wire.
struct SignalSample {
  std::string vehicle_id;
  SignalId signal{};
  std::int64_t t_ms = 0;
  double value = 0.0;

  bool operator==(const SignalSample&) const = default;
};

/// A contiguous drive. Samples sit on [start_ms, end_ms]; a trip sampled at
/// 10 Hz with N samples per series spans end_ms - start_ms = N * 100 ms.
/// soc_trace holds fractions in [0, 1]; odo_trace holds kilometres.
struct Trip {
  std::string trip_id;
  std::string vehicle_id;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  Series soc_trace;
  Series odo_trace;
  std::array<Series, kSignalCount> series;

  std::int64_t duration_ms() const noexcept { return end_ms - start_ms; }
  Series& signal(SignalId id) { return series[index_of(id)]; }
  const Series& signal(SignalId id) const { return series[index_of(id)]; }

  bool operator==(const Trip&) const = default;
};

/// Equality that compares every double by bit pattern (NaN == NaN, -0 != +0).
bool bitwise_equal(const Trip& a, const Trip& b);

/// Canonical trip id: "<vehicle_id>-<start_ms as 13+ digits>". Lexicographic
/// order of ids of one vehicle equals chronological order.
std::string make_trip_id(const std::string& vehicle_id, std::int64_t start_ms);

enum class TripStatus { Accepted, TooShort, Faulty };

struct TripVerdict {
  TripStatus status = TripStatus::Accepted;
  std::string reason;

  bool accepted() const noexcept { return status == TripStatus::Accepted; }
};

std::string_view status_name(TripStatus status) noexcept;

inline constexpr std::int64_t kMinTripDurationMs = 360'000;
inline constexpr double kMaxMissingFraction = 0.01;

/// Throws Error(StructuralError) if the trip violates its structural
/// invariants: empty ids, start >= end, unordered or out-of-range timestamps,
/// empty SOC/odometer traces, decreasing odometer, SOC outside [0, 1].
void check_structure(const Trip& trip);

/// Screens a trip before feature extraction.
///   TooShort: shorter than min_duration_ms.
///   Faulty:   a non-finite or implausible value, or a signal missing more
///             than 1% of its nominal 10 Hz samples.
/// Structural defects throw Error(StructuralError).
TripVerdict validate_trip(const Trip& trip, const SignalCatalog& catalog = SignalCatalog::defaults(),
                          std::int64_t min_duration_ms = kMinTripDurationMs);

}  // namespace evfleet::core

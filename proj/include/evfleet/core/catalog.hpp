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
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace evfleet::core {

inline constexpr std::size_t kSignalCount = 15;

/// The fixed set of model input signals. Enumerator order is the canonical
/// catalog order: driving behavior, battery state, environmental condition,
/// with the axle-split torques listed front then rear.
enum class SignalId : std::uint8_t {
  AccelerationTorqueFront,
  AccelerationTorqueRear,
  BrakeTorqueFront,
  BrakeTorqueRear,
  RecuperationTorqueFront,
  RecuperationTorqueRear,
  LateralAcceleration,
  VehicleSpeed,
  ElectricCurrentDriving,
  LongitudinalAcceleration,
  TotalElectricCurrent,
  BatteryVoltage,
  BatteryTemperature,
  GeodeticAltitude,
  AmbientTemperature,
};

enum class SignalCategory : std::uint8_t { DrivingBehavior, BatteryState, EnvironmentalCondition };

constexpr std::size_t index_of(SignalId id) noexcept { return static_cast<std::size_t>(id); }
constexpr SignalId signal_at(std::size_t index) noexcept { return static_cast<SignalId>(index); }

std::string_view signal_name(SignalId id) noexcept;
std::string_view category_name(SignalCategory category) noexcept;

/// Closed-catalog lookup; nullopt for names outside the catalog.
std::optional<SignalId> find_signal(std::string_view name) noexcept;

/// Like find_signal but throws Error(NotFound).
SignalId lookup(std::string_view name);

struct SignalCatalogEntry {
  SignalId id;
  SignalCategory category;
  std::string unit;
  double min = 0.0;
  double max = 0.0;

  std::string_view name() const noexcept { return signal_name(id); }
  bool plausible(double value) const noexcept { return value >= min && value <= max; }

  bool operator==(const SignalCatalogEntry&) const = default;
};

/// The 15-entry catalog with its plausible ranges. Ranges are configuration;
/// ids, categories and order are fixed.
class SignalCatalog {
 public:
  /// Shipped default units and plausible ranges.
  static const SignalCatalog& defaults();

  /// Parses the text form written by to_text(). Every catalog signal must
  /// appear exactly once with its fixed category; entries may come in any
  /// order. Throws Error(StructuralError) on malformed documents and
  /// Error(NotFound) on unknown names.
  static SignalCatalog from_text(std::string_view text);

  /// One entry per line: "name category unit min max". Lines starting with
  /// '#' are comments.
  std::string to_text() const;

  std::span<const SignalCatalogEntry, kSignalCount> entries() const noexcept { return entries_; }
  const SignalCatalogEntry& entry(SignalId id) const noexcept { return entries_[index_of(id)]; }

  bool operator==(const SignalCatalog&) const = default;

 private:
  SignalCatalog() = default;
  std::array<SignalCatalogEntry, kSignalCount> entries_{};
};

/// The default catalog entries in canonical order.
std::span<const SignalCatalogEntry, kSignalCount> catalog();

}  // namespace evfleet::core

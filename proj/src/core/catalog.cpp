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

#include "evfleet/core/catalog.hpp"

#include <sstream>

#include "evfleet/error.hpp"
#include "evfleet/util/text.hpp"

namespace evfleet::core {
namespace {

constexpr std::array<std::string_view, kSignalCount> kNames = {
    "acceleration_torque_front",
    "acceleration_torque_rear",
    "brake_torque_front",
    "brake_torque_rear",
    "recuperation_torque_front",
    "recuperation_torque_rear",
    "lateral_acceleration",
    "vehicle_speed",
    "electric_current_driving",
    "longitudinal_acceleration",
    "total_electric_current",
    "battery_voltage",
    "battery_temperature",
    "geodetic_altitude",
    "ambient_temperature",
};

std::optional<SignalCategory> parse_category(std::string_view text) {
  if (text == "DrivingBehavior") return SignalCategory::DrivingBehavior;
  if (text == "BatteryState") return SignalCategory::BatteryState;
  if (text == "EnvironmentalCondition") return SignalCategory::EnvironmentalCondition;
  return std::nullopt;
}

SignalCategory fixed_category(SignalId id) {
  const auto i = index_of(id);
  if (i < 10) return SignalCategory::DrivingBehavior;
  if (i < 13) return SignalCategory::BatteryState;
  return SignalCategory::EnvironmentalCondition;
}

}  // namespace

std::string_view signal_name(SignalId id) noexcept { return kNames[index_of(id)]; }

std::string_view category_name(SignalCategory category) noexcept {
  switch (category) {
    case SignalCategory::DrivingBehavior: return "DrivingBehavior";
    case SignalCategory::BatteryState: return "BatteryState";
    case SignalCategory::EnvironmentalCondition: return "EnvironmentalCondition";
  }
  return "";
}

std::optional<SignalId> find_signal(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kSignalCount; ++i) {
    if (kNames[i] == name) return signal_at(i);
  }
  return std::nullopt;
}

SignalId lookup(std::string_view name) {
  if (auto id = find_signal(name)) return *id;
  throw Error(ErrorCode::NotFound, "no catalog signal named '" + std::string(name) + "'");
}

const SignalCatalog& SignalCatalog::defaults() {
  static const SignalCatalog instance = [] {
    SignalCatalog c;
    auto set = [&c](SignalId id, std::string unit, double lo, double hi) {
      c.entries_[index_of(id)] = SignalCatalogEntry{id, fixed_category(id), std::move(unit), lo, hi};
    };
    // Torques are per axle at the wheels; brake and recuperation torques are
    // reported as non-negative magnitudes.
    set(SignalId::AccelerationTorqueFront, "N*m", 0.0, 5000.0);
    set(SignalId::AccelerationTorqueRear, "N*m", 0.0, 5000.0);
    set(SignalId::BrakeTorqueFront, "N*m", 0.0, 8000.0);
    set(SignalId::BrakeTorqueRear, "N*m", 0.0, 8000.0);
    set(SignalId::RecuperationTorqueFront, "N*m", 0.0, 5000.0);
    set(SignalId::RecuperationTorqueRear, "N*m", 0.0, 5000.0);
    set(SignalId::LateralAcceleration, "m/s^2", -15.0, 15.0);
    set(SignalId::VehicleSpeed, "m/s", 0.0, 70.0);
    set(SignalId::ElectricCurrentDriving, "A", -1000.0, 1000.0);
    set(SignalId::LongitudinalAcceleration, "m/s^2", -15.0, 15.0);
    set(SignalId::TotalElectricCurrent, "A", -1000.0, 1000.0);
    set(SignalId::BatteryVoltage, "V", 0.0, 1000.0);
    set(SignalId::BatteryTemperature, "degC", -40.0, 80.0);
    set(SignalId::GeodeticAltitude, "m", -500.0, 5000.0);
    set(SignalId::AmbientTemperature, "degC", -50.0, 60.0);
    return c;
  }();
  return instance;
}

SignalCatalog SignalCatalog::from_text(std::string_view text) {
  SignalCatalog c;
  std::array<bool, kSignalCount> seen{};
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string_view> fields;
    for (auto f : split(line, ' ')) {
      if (!trim(f).empty()) fields.push_back(trim(f));
    }
    const auto where = "catalog line " + std::to_string(line_no);
    if (fields.size() != 5) throw Error(ErrorCode::StructuralError, where + ": expected 5 fields");

    const SignalId id = lookup(fields[0]);
    const auto category = parse_category(fields[1]);
    if (!category || *category != fixed_category(id)) {
      throw Error(ErrorCode::StructuralError, where + ": wrong category for " + std::string(fields[0]));
    }
    const auto lo = parse_double(fields[3]);
    const auto hi = parse_double(fields[4]);
    if (!lo || !hi || !(*lo <= *hi)) {
      throw Error(ErrorCode::StructuralError, where + ": bad plausible range");
    }
    if (seen[index_of(id)]) throw Error(ErrorCode::StructuralError, where + ": duplicate entry");
    seen[index_of(id)] = true;
    c.entries_[index_of(id)] = SignalCatalogEntry{id, *category, std::string(fields[2]), *lo, *hi};
  }
  for (std::size_t i = 0; i < kSignalCount; ++i) {
    if (!seen[i]) {
      throw Error(ErrorCode::StructuralError, "catalog is missing " + std::string(kNames[i]));
    }
  }
  return c;
}

std::string SignalCatalog::to_text() const {
  std::string out = "# name category unit min max\n";
  for (const auto& e : entries_) {
    out += e.name();
    out += ' ';
    out += category_name(e.category);
    out += ' ';
    out += e.unit;
    out += ' ';
    append_double(out, e.min);
    out += ' ';
    append_double(out, e.max);
    out += '\n';
  }
  return out;
}

std::span<const SignalCatalogEntry, kSignalCount> catalog() { return SignalCatalog::defaults().entries(); }

}  // namespace evfleet::core

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

#include <cmath>
#include <cstdio>
#include <sstream>

#include "evfleet/error.hpp"
#include "evfleet/synthfleet/synthfleet.hpp"
#include "evfleet/util/rng.hpp"
#include "evfleet/util/text.hpp"

namespace evfleet::synthfleet {
namespace {

constexpr std::int64_t kFleetEpochMs = 1'700'000'000'000;
constexpr std::int64_t kDayMs = 86'400'000;
constexpr double kMaxGrade = 0.03;
// Cabin climate control: extra auxiliary load per kelvin away from the set point.
constexpr double kCabinSetPointC = 21.0;
constexpr double kClimateKwPerK = 0.12;
constexpr double kMixedRoadSpeed = 16.0;  // m/s

// Sub-stream ids under a vehicle seed.
constexpr std::uint64_t kDriverStream = 0;
constexpr std::uint64_t kVehicleStream = 1;
constexpr std::uint64_t kRouteStreamBase = 1000;
constexpr std::uint64_t kDynamicsStreamBase = 1'000'000;

std::uint64_t vehicle_seed(const FleetConfig& config, int index) {
  return mix_seed(config.seed, static_cast<std::uint64_t>(index) + 1);
}

RouteProfile random_route(Rng& rng, double duration_s) {
  RouteProfile rp;
  rp.duration_s = duration_s;
  rp.ambient_temp_c = rng.uniform(-10.0, 35.0);
  rp.altitude.clear();
  double s = 0.0;
  double h = rng.uniform(100.0, 600.0);
  rp.altitude.push_back({s, h});
  // Cover the longest distance the trip could possibly reach.
  const double reach_km = duration_s * kTopSpeedMps / 1000.0 + 1.0;
  while (s < reach_km) {
    const double len = rng.uniform(0.3, 1.5);
    h += rng.uniform(-kMaxGrade, kMaxGrade) * len * 1000.0;
    s += len;
    rp.altitude.push_back({s, h});
  }
  return rp;
}

}  // namespace

void validate(const FleetConfig& config) {
  if (config.n_vehicles < 1) throw Error(ErrorCode::ParamError, "n_vehicles must be >= 1");
  if (config.trips_per_vehicle < 1) throw Error(ErrorCode::ParamError, "trips_per_vehicle must be >= 1");
  if (!(config.min_trip_minutes > 0.0) || !(config.max_trip_minutes >= config.min_trip_minutes) ||
      config.max_trip_minutes > 600.0) {
    throw Error(ErrorCode::ParamError, "trip duration bounds must satisfy 0 < min <= max <= 600 minutes");
  }
  for (const auto& [id, factor] : config.aging) {
    if (!(factor >= 1.0) || !std::isfinite(factor)) {
      throw Error(ErrorCode::ParamError, "internal_loss_factor for " + id + " must be finite and >= 1");
    }
  }
  validate(config.vehicle);
}

std::string vehicle_id(int index, int n_vehicles) {
  std::size_t width = 2;
  for (int n = n_vehicles; n >= 100; n /= 10) ++width;
  auto digits = std::to_string(index + 1);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return "v" + digits;
}

DriverProfile fleet_driver(const FleetConfig& config, int index) {
  Rng rng(mix_seed(vehicle_seed(config, index), kDriverStream));
  DriverProfile dp;
  // Habits on a mixed road; each trip rescales them to its road type.
  dp.target_speed_mean = kMixedRoadSpeed * rng.uniform(0.85, 1.15);
  dp.target_speed_std = dp.target_speed_mean * rng.uniform(0.15, 0.3);
  dp.accel_aggressiveness = rng.uniform(0.2, 1.0);
  dp.brake_aggressiveness = rng.uniform(0.2, 1.0);
  return dp;
}

std::vector<core::Trip> generate_vehicle_trips(const FleetConfig& config, int index, double internal_loss_factor) {
  validate(config);
  if (index < 0) throw Error(ErrorCode::ParamError, "vehicle index must be >= 0");

  const auto vseed = vehicle_seed(config, index);
  const DriverProfile dp = fleet_driver(config, index);
  VehicleParams vp = config.vehicle;
  vp.internal_loss_factor = internal_loss_factor;

  Rng vehicle_rng(mix_seed(vseed, kVehicleStream));
  double odometer_km = vehicle_rng.uniform(1000.0, 40000.0);
  const std::string vid = vehicle_id(index, std::max(config.n_vehicles, index + 1));

  std::vector<core::Trip> trips;
  trips.reserve(static_cast<std::size_t>(config.trips_per_vehicle));
  for (int j = 0; j < config.trips_per_vehicle; ++j) {
    Rng rng(mix_seed(vseed, kRouteStreamBase + static_cast<std::uint64_t>(j)));
    const double minutes = rng.uniform(config.min_trip_minutes, config.max_trip_minutes);
    const RouteProfile rp = random_route(rng, std::round(minutes * 600.0) / 10.0);
    // Urban, mixed or highway driving, scaled by the driver's habits.
    static constexpr double kRoadSpeed[][2] = {{5.0, 10.0}, {12.0, 20.0}, {24.0, 33.0}};
    const auto& road = kRoadSpeed[rng.below(3)];
    DriverProfile trip_dp = dp;
    const double scale = rng.uniform(road[0], road[1]) / kMixedRoadSpeed;
    trip_dp.target_speed_mean = dp.target_speed_mean * scale;
    trip_dp.target_speed_std = dp.target_speed_std * scale;
    vp.aux_power_kw = config.vehicle.aux_power_kw + kClimateKwPerK * std::abs(rp.ambient_temp_c - kCabinSetPointC);

    TripContext ctx;
    ctx.vehicle_id = vid;
    const auto offset = static_cast<std::int64_t>(rng.below(12 * 36'000)) * core::kSamplePeriodMs;
    ctx.start_ms = kFleetEpochMs + j * kDayMs + offset;
    ctx.initial_soc = rng.uniform(0.55, 0.95);
    ctx.initial_odometer_km = odometer_km;
    ctx.initial_battery_temp_c = rp.ambient_temp_c + rng.uniform(0.0, 10.0);

    auto trip = simulate_trip(vp, trip_dp, rp, mix_seed(vseed, kDynamicsStreamBase + static_cast<std::uint64_t>(j)), ctx);
    odometer_km = trip.odo_trace.back().value;
    trips.push_back(std::move(trip));
  }
  return trips;
}

void for_each_fleet_trip(const FleetConfig& config, const std::function<void(core::Trip&&)>& sink) {
  validate(config);
  for (int i = 0; i < config.n_vehicles; ++i) {
    const auto vid = vehicle_id(i, config.n_vehicles);
    const auto it = config.aging.find(vid);
    const double factor = it == config.aging.end() ? 1.0 : it->second;
    for (auto& trip : generate_vehicle_trips(config, i, factor)) sink(std::move(trip));
  }
}

std::vector<core::Trip> generate_fleet(const FleetConfig& config) {
  std::vector<core::Trip> trips;
  for_each_fleet_trip(config, [&trips](core::Trip&& t) { trips.push_back(std::move(t)); });
  return trips;
}

std::vector<core::Trip> generate_fleet(int n_vehicles, int trips_per_vehicle,
                                       const std::map<std::string, double>& aging_map, std::uint64_t seed) {
  FleetConfig config;
  config.n_vehicles = n_vehicles;
  config.trips_per_vehicle = trips_per_vehicle;
  config.aging = aging_map;
  config.seed = seed;
  return generate_fleet(config);
}

std::map<std::string, double> parse_aging_map(std::string_view text) {
  std::map<std::string, double> out;
  for (auto item : split(text, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    const auto factor = eq == std::string_view::npos ? std::nullopt : parse_double(item.substr(eq + 1));
    if (!factor) throw Error(ErrorCode::ParamError, "aging entry must be vehicle_id=factor: " + std::string(item));
    out[std::string(trim(item.substr(0, eq)))] = *factor;
  }
  return out;
}

FleetConfig parse_fleet_config(std::string_view text) {
  FleetConfig config;
  for (auto raw : split(text, '\n')) {
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorCode::ParamError, "expected key = value: " + std::string(line));
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    auto need_int = [&](std::string_view v) {
      auto n = parse_int64(v);
      if (!n) throw Error(ErrorCode::ParamError, "not an integer: " + std::string(v));
      return *n;
    };
    auto need_double = [&](std::string_view v) {
      auto d = parse_double(v);
      if (!d) throw Error(ErrorCode::ParamError, "not a number: " + std::string(v));
      return *d;
    };
    if (key == "vehicles") {
      config.n_vehicles = static_cast<int>(need_int(value));
    } else if (key == "trips_per_vehicle") {
      config.trips_per_vehicle = static_cast<int>(need_int(value));
    } else if (key == "seed") {
      config.seed = static_cast<std::uint64_t>(need_int(value));
    } else if (key == "aging") {
      config.aging = parse_aging_map(value);
    } else if (key == "min_trip_minutes") {
      config.min_trip_minutes = need_double(value);
    } else if (key == "max_trip_minutes") {
      config.max_trip_minutes = need_double(value);
    } else {
      throw Error(ErrorCode::ParamError, "unknown fleet config key: " + std::string(key));
    }
  }
  validate(config);
  return config;
}

std::string to_text(const FleetConfig& config) {
  std::ostringstream os;
  os << "vehicles = " << config.n_vehicles << '\n'
     << "trips_per_vehicle = " << config.trips_per_vehicle << '\n'
     << "seed = " << config.seed << '\n'
     << "min_trip_minutes = " << format_double(config.min_trip_minutes) << '\n'
     << "max_trip_minutes = " << format_double(config.max_trip_minutes) << '\n'
     << "aging = ";
  bool first = true;
  for (const auto& [id, factor] : config.aging) {
    os << (first ? "" : ",") << id << '=' << format_double(factor);
    first = false;
  }
  os << '\n';
  return os.str();
}

}  // namespace evfleet::synthfleet

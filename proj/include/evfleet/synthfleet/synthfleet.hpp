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
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "evfleet/core/trip.hpp"

namespace evfleet::synthfleet {

inline constexpr double kGravity = 9.81;    // m/s^2
inline constexpr double kAirDensity = 1.2;  // kg/m^3
inline constexpr double kTopSpeedMps = 45.0;  // drivers never aim above this

/// Affine open-circuit voltage map used for battery current and voltage.
constexpr double battery_voltage(double soc) noexcept { return 320.0 + 80.0 * soc; }

struct VehicleParams {
  double mass_kg = 1800.0;
  double drag_area_m2 = 0.65;  // C_d * A
  double rolling_coeff = 0.011;
  double drivetrain_eff = 0.90;
  double regen_eff = 0.60;
  double battery_capacity_kwh = 60.0;
  double aux_power_kw = 0.8;
  /// 1.0 is a fresh battery; larger values scale the drivetrain share of the
  /// power drawn from the cells (aging through internal losses).
  double internal_loss_factor = 1.0;
  double wheel_radius_m = 0.33;
  /// Braking force the motors can recuperate; the friction brakes take the rest.
  double max_regen_force_n = 0.2 * 1800.0 * kGravity;

  bool operator==(const VehicleParams&) const = default;
};

struct DriverProfile {
  double target_speed_mean = 15.0;  // m/s
  double target_speed_std = 3.0;    // m/s
  double accel_aggressiveness = 0.5;
  double brake_aggressiveness = 0.5;
};

struct AltitudeKnot {
  double s_km = 0.0;
  double altitude_m = 0.0;
};

/// Altitude is piecewise linear in distance travelled; flat past the last knot.
struct RouteProfile {
  double duration_s = 600.0;
  std::vector<AltitudeKnot> altitude{{0.0, 200.0}};
  double ambient_temp_c = 20.0;
};

/// Where and when a simulated trip happens.
struct TripContext {
  std::string vehicle_id = "v01";
  std::int64_t start_ms = 1'700'000'000'000;
  double initial_soc = 0.9;
  double initial_odometer_km = 10'000.0;
  double initial_battery_temp_c = 25.0;
};

/// Throws Error(ParamError) if any parameter invariant is violated.
void validate(const VehicleParams& vp);
void validate(const DriverProfile& dp);
void validate(const RouteProfile& rp);

/// Altitude (m) and grade (dh/ds) at distance s_km along the route.
double altitude_at(const RouteProfile& rp, double s_km);
double grade_at(const RouteProfile& rp, double s_km);

struct SimulationResult {
  core::Trip trip;
  /// Battery power of every simulated step (W); step k spans sample k.
  std::vector<double> battery_power_w;
  double initial_soc = 0.0;
  /// SOC after the last step (one sample period past the last trace point).
  double final_soc = 0.0;
  bool depleted = false;
};

/// Simulates one trip at 10 Hz. Per step:
///   P_wheel = (m a + m g sin(theta) + 1/2 rho CdA v^2 + Crr m g cos(theta)) v
///   P_batt  = ilf * (P_wheel / eta_drive  if P_wheel >= 0
///                    P_wheel * eta_regen  otherwise) + P_aux
///   dSOC    = -P_batt dt / E_capacity
/// where a negative P_wheel is limited to what max_regen_force_n can recuperate.
/// The trip stops early rather than letting SOC drop below zero.
SimulationResult simulate_trip_detailed(const VehicleParams& vp, const DriverProfile& dp, const RouteProfile& rp,
                                        std::uint64_t seed, const TripContext& ctx = {});

core::Trip simulate_trip(const VehicleParams& vp, const DriverProfile& dp, const RouteProfile& rp,
                         std::uint64_t seed, const TripContext& ctx = {});

struct FleetConfig {
  int n_vehicles = 10;
  int trips_per_vehicle = 20;
  std::map<std::string, double> aging;  // vehicle_id -> internal_loss_factor
  std::uint64_t seed = 7;
  double min_trip_minutes = 8.0;
  double max_trip_minutes = 24.0;
  VehicleParams vehicle;

  bool operator==(const FleetConfig&) const = default;
};

/// Throws Error(ParamError) on invalid counts or durations.
void validate(const FleetConfig& config);

/// "v01", "v02", ... (zero-padded to at least two digits).
std::string vehicle_id(int index, int n_vehicles);

/// Driver of vehicle `index`, derived from the fleet seed only.
DriverProfile fleet_driver(const FleetConfig& config, int index);

/// Trips of one vehicle. `index` may exceed n_vehicles - 1 to create extra
/// vehicles drawn from the same population. Routes, drivers and timing depend
/// on (seed, index) only, so changing internal_loss_factor yields the same
/// drives on an aged battery. Each trip picks an urban, mixed or highway road
/// that rescales the driver's target speed, and adds a cabin climate load to
/// aux_power_kw that grows with |ambient - 21 degC|.
std::vector<core::Trip> generate_vehicle_trips(const FleetConfig& config, int index,
                                               double internal_loss_factor);

/// Streams every fleet trip in (vehicle, trip) order without holding the
/// whole fleet in memory.
void for_each_fleet_trip(const FleetConfig& config, const std::function<void(core::Trip&&)>& sink);

std::vector<core::Trip> generate_fleet(const FleetConfig& config);
std::vector<core::Trip> generate_fleet(int n_vehicles, int trips_per_vehicle,
                                       const std::map<std::string, double>& aging_map, std::uint64_t seed);

/// Fleet config as "key = value" lines (vehicles, trips_per_vehicle, seed,
/// aging, min_trip_minutes, max_trip_minutes). aging is a comma list of
/// vehicle_id=factor pairs.
FleetConfig parse_fleet_config(std::string_view text);
std::string to_text(const FleetConfig& config);
std::map<std::string, double> parse_aging_map(std::string_view text);

/// Specific consumption between t0 and t1 from linearly interpolated SOC and
/// odometer traces (the last trace segment extends to end_ms).
/// Throws Error(ZeroDistance) when the odometer does not advance.
double oracle_gamma(const core::Trip& trip, std::int64_t t0_ms, std::int64_t t1_ms);

}  // namespace evfleet::synthfleet

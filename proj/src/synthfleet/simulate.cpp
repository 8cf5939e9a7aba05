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

#include <algorithm>
#include <cmath>

#include "evfleet/error.hpp"
#include "evfleet/synthfleet/synthfleet.hpp"
#include "evfleet/util/rng.hpp"

namespace evfleet::synthfleet {
namespace {

using core::SignalId;

// Target-speed process: mean reversion time and tracking gain of the driver.
constexpr double kTargetReversionPerS = 1.0 / 45.0;
constexpr double kTrackingGainPerS = 0.5;
// Road curvature process for lateral acceleration.
constexpr double kCurvatureStd = 0.002;  // 1/m
constexpr double kCurvatureReversionPerS = 1.0 / 8.0;
// First-order battery thermal model.
constexpr double kThermalTimeConstantS = 1800.0;
constexpr double kJouleHeatingKPerA2S = 2.5e-8;

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::ParamError, what);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void validate(const VehicleParams& vp) {
  require(finite(vp.mass_kg) && vp.mass_kg > 0.0, "mass_kg must be positive");
  require(finite(vp.drag_area_m2) && vp.drag_area_m2 > 0.0, "drag_area_m2 must be positive");
  require(finite(vp.rolling_coeff) && vp.rolling_coeff > 0.0, "rolling_coeff must be positive");
  require(vp.drivetrain_eff > 0.0 && vp.drivetrain_eff <= 1.0, "drivetrain_eff must lie in (0, 1]");
  require(vp.regen_eff >= 0.0 && vp.regen_eff < 1.0, "regen_eff must lie in [0, 1)");
  require(finite(vp.battery_capacity_kwh) && vp.battery_capacity_kwh > 0.0, "battery_capacity_kwh must be positive");
  require(finite(vp.aux_power_kw) && vp.aux_power_kw >= 0.0, "aux_power_kw must be non-negative");
  require(finite(vp.internal_loss_factor) && vp.internal_loss_factor >= 1.0, "internal_loss_factor must be >= 1");
  require(finite(vp.wheel_radius_m) && vp.wheel_radius_m > 0.0, "wheel_radius_m must be positive");
  require(finite(vp.max_regen_force_n) && vp.max_regen_force_n >= 0.0, "max_regen_force_n must be non-negative");
}

void validate(const DriverProfile& dp) {
  require(finite(dp.target_speed_mean), "target_speed_mean must be finite");
  require(finite(dp.target_speed_std) && dp.target_speed_std >= 0.0, "target_speed_std must be >= 0");
  require(dp.accel_aggressiveness > 0.0 && dp.accel_aggressiveness <= 1.0, "accel_aggressiveness must lie in (0, 1]");
  require(dp.brake_aggressiveness > 0.0 && dp.brake_aggressiveness <= 1.0, "brake_aggressiveness must lie in (0, 1]");
}

void validate(const RouteProfile& rp) {
  require(finite(rp.duration_s) && rp.duration_s > 0.0, "duration_s must be positive");
  require(finite(rp.ambient_temp_c), "ambient_temp_c must be finite");
  require(!rp.altitude.empty(), "altitude profile needs at least one knot");
  for (std::size_t i = 0; i < rp.altitude.size(); ++i) {
    require(finite(rp.altitude[i].s_km) && finite(rp.altitude[i].altitude_m), "altitude knots must be finite");
    require(i == 0 || rp.altitude[i].s_km > rp.altitude[i - 1].s_km, "altitude knots must increase in s_km");
  }
}

double altitude_at(const RouteProfile& rp, double s_km) {
  const auto& k = rp.altitude;
  if (s_km <= k.front().s_km) return k.front().altitude_m;
  if (s_km >= k.back().s_km) return k.back().altitude_m;
  auto hi = std::upper_bound(k.begin(), k.end(), s_km, [](double s, const AltitudeKnot& a) { return s < a.s_km; });
  auto lo = hi - 1;
  const double f = (s_km - lo->s_km) / (hi->s_km - lo->s_km);
  return lo->altitude_m + f * (hi->altitude_m - lo->altitude_m);
}

double grade_at(const RouteProfile& rp, double s_km) {
  const auto& k = rp.altitude;
  if (k.size() < 2 || s_km < k.front().s_km || s_km >= k.back().s_km) return 0.0;
  auto hi = std::upper_bound(k.begin(), k.end(), s_km, [](double s, const AltitudeKnot& a) { return s < a.s_km; });
  auto lo = hi - 1;
  return (hi->altitude_m - lo->altitude_m) / ((hi->s_km - lo->s_km) * 1000.0);
}

SimulationResult simulate_trip_detailed(const VehicleParams& vp, const DriverProfile& dp, const RouteProfile& rp,
                                        std::uint64_t seed, const TripContext& ctx) {
  validate(vp);
  validate(dp);
  validate(rp);
  require(!ctx.vehicle_id.empty(), "vehicle_id must be non-empty");
  require(ctx.initial_soc >= 0.0 && ctx.initial_soc <= 1.0, "initial_soc must lie in [0, 1]");
  require(finite(ctx.initial_odometer_km) && ctx.initial_odometer_km >= 0.0, "initial odometer must be >= 0");

  Rng rng(seed);
  const double dt = static_cast<double>(core::kSamplePeriodMs) / 1000.0;
  const auto steps = static_cast<std::int64_t>(std::llround(rp.duration_s / dt));
  require(steps >= 1, "duration shorter than one sample period");

  const double capacity_j = vp.battery_capacity_kwh * 3.6e6;
  const double aux_w = vp.aux_power_kw * 1000.0;
  const double max_accel = 0.8 + 2.2 * dp.accel_aggressiveness;
  const double max_decel = 1.0 + 4.0 * dp.brake_aggressiveness;
  const double target_sigma = dp.target_speed_std * std::sqrt(2.0 * kTargetReversionPerS);
  const double curvature_sigma = kCurvatureStd * std::sqrt(2.0 * kCurvatureReversionPerS);

  SimulationResult out;
  auto& trip = out.trip;
  trip.vehicle_id = ctx.vehicle_id;
  trip.start_ms = ctx.start_ms;
  trip.trip_id = core::make_trip_id(ctx.vehicle_id, ctx.start_ms);
  const auto reserve = static_cast<std::size_t>(steps);
  trip.soc_trace.reserve(reserve);
  trip.odo_trace.reserve(reserve);
  for (auto& s : trip.series) s.reserve(reserve);
  out.battery_power_w.reserve(reserve);

  double target = dp.target_speed_mean + dp.target_speed_std * rng.normal();
  double curvature = kCurvatureStd * rng.normal();
  double speed = 0.0;
  double distance_m = 0.0;
  double soc = ctx.initial_soc;
  double battery_temp = ctx.initial_battery_temp_c;
  out.initial_soc = soc;

  std::int64_t k = 0;
  for (; k < steps; ++k) {
    const std::int64_t t_ms = ctx.start_ms + k * core::kSamplePeriodMs;

    target += kTargetReversionPerS * (dp.target_speed_mean - target) * dt + target_sigma * std::sqrt(dt) * rng.normal();
    curvature += -kCurvatureReversionPerS * curvature * dt + curvature_sigma * std::sqrt(dt) * rng.normal();

    double accel = std::clamp(kTrackingGainPerS * (std::clamp(target, 0.0, kTopSpeedMps) - speed), -max_decel, max_accel);
    if (speed + accel * dt < 0.0) accel = -speed / dt;

    const double s_km = distance_m / 1000.0;
    const double grade = grade_at(rp, s_km);
    const double sin_theta = grade / std::sqrt(1.0 + grade * grade);
    const double cos_theta = 1.0 / std::sqrt(1.0 + grade * grade);

    const double force = vp.mass_kg * accel + vp.mass_kg * kGravity * sin_theta +
                         0.5 * kAirDensity * vp.drag_area_m2 * speed * speed +
                         vp.rolling_coeff * vp.mass_kg * kGravity * cos_theta;

    double traction_force = 0.0;
    double regen_force = 0.0;
    double friction_force = 0.0;
    if (force >= 0.0) {
      traction_force = force;
    } else {
      regen_force = std::min(-force, vp.max_regen_force_n);
      friction_force = -force - regen_force;
    }

    const double wheel_power = (traction_force - regen_force) * speed;
    const double drive_power =
        wheel_power >= 0.0 ? wheel_power / vp.drivetrain_eff : wheel_power * vp.regen_eff;
    const double battery_power = vp.internal_loss_factor * drive_power + aux_w;
    const double next_soc = soc - battery_power * dt / capacity_j;
    if (next_soc < 0.0) {
      out.depleted = true;
      break;
    }

    // Sensors see terminal quantities; the internal loss factor only shows in
    // how fast the cells drain.
    const double voltage = battery_voltage(soc);
    const double drive_current = drive_power / voltage;
    const double total_current = (drive_power + aux_w) / voltage;

    const double half_r = 0.5 * vp.wheel_radius_m;
    auto push = [&](SignalId id, double v) { trip.signal(id).push_back({t_ms, v}); };
    push(SignalId::AccelerationTorqueFront, traction_force * half_r);
    push(SignalId::AccelerationTorqueRear, traction_force * half_r);
    push(SignalId::BrakeTorqueFront, friction_force * half_r);
    push(SignalId::BrakeTorqueRear, friction_force * half_r);
    push(SignalId::RecuperationTorqueFront, regen_force * half_r);
    push(SignalId::RecuperationTorqueRear, regen_force * half_r);
    push(SignalId::LateralAcceleration, std::clamp(speed * speed * curvature, -10.0, 10.0));
    push(SignalId::VehicleSpeed, speed);
    push(SignalId::ElectricCurrentDriving, drive_current);
    push(SignalId::LongitudinalAcceleration, accel);
    push(SignalId::TotalElectricCurrent, total_current);
    push(SignalId::BatteryVoltage, voltage);
    push(SignalId::BatteryTemperature, battery_temp);
    push(SignalId::GeodeticAltitude, altitude_at(rp, s_km));
    push(SignalId::AmbientTemperature, rp.ambient_temp_c);
    trip.soc_trace.push_back({t_ms, soc});
    trip.odo_trace.push_back({t_ms, ctx.initial_odometer_km + distance_m / 1000.0});
    out.battery_power_w.push_back(battery_power);

    soc = std::min(next_soc, 1.0);  // a full battery rejects further charge
    battery_temp += dt * ((rp.ambient_temp_c - battery_temp) / kThermalTimeConstantS +
                          kJouleHeatingKPerA2S * total_current * total_current);
    distance_m += speed * dt + 0.5 * accel * dt * dt;
    speed = std::max(0.0, speed + accel * dt);
  }

  require(k > 0, "battery too empty to simulate a single step");
  trip.end_ms = ctx.start_ms + k * core::kSamplePeriodMs;
  out.final_soc = soc;
  return out;
}

core::Trip simulate_trip(const VehicleParams& vp, const DriverProfile& dp, const RouteProfile& rp,
                         std::uint64_t seed, const TripContext& ctx) {
  return std::move(simulate_trip_detailed(vp, dp, rp, seed, ctx).trip);
}

}  // namespace evfleet::synthfleet

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

#include <gtest/gtest.h>

#include <cmath>

#include "evfleet/core/trip.hpp"
#include "evfleet/synthfleet/synthfleet.hpp"
#include "fixtures.hpp"

namespace evfleet {
namespace {

using namespace synthfleet;
using core::SignalId;
using testing::error_of;

DriverProfile steady_driver(double speed) {
  DriverProfile dp;
  dp.target_speed_mean = speed;
  dp.target_speed_std = 0.0;
  return dp;
}

RouteProfile flat_route(double duration_s) {
  RouteProfile rp;
  rp.duration_s = duration_s;
  rp.altitude = {{0.0, 200.0}};
  return rp;
}

TEST(Simulate, FlatSteadyDriveDrainsSocEveryStep) {
  const auto trip = simulate_trip(VehicleParams{}, steady_driver(20.0), flat_route(600.0), 1);
  ASSERT_EQ(trip.soc_trace.size(), 6000u);
  for (std::size_t k = 1; k < trip.soc_trace.size(); ++k) {
    ASSERT_LT(trip.soc_trace[k].value, trip.soc_trace[k - 1].value) << "step " << k;
  }
  EXPECT_TRUE(core::validate_trip(trip).accepted());
}

TEST(Simulate, SteepDescentWithRegenChargesTheBattery) {
  VehicleParams vp;
  vp.regen_eff = 0.6;
  RouteProfile rp = flat_route(900.0);
  rp.altitude = {{0.0, 1500.0}, {20.0, 100.0}};  // 7% down for 20 km
  const auto trip = simulate_trip(vp, steady_driver(15.0), rp, 2);
  bool rising = false;
  for (std::size_t k = 1; k < trip.soc_trace.size() && !rising; ++k) {
    rising = trip.soc_trace[k].value > trip.soc_trace[k - 1].value;
  }
  EXPECT_TRUE(rising);
}

TEST(Simulate, SameInputsGiveBitwiseIdenticalTrips) {
  DriverProfile dp;
  RouteProfile rp = flat_route(480.0);
  rp.altitude = {{0.0, 300.0}, {1.0, 330.0}, {2.5, 280.0}};
  const auto a = simulate_trip(VehicleParams{}, dp, rp, 99);
  const auto b = simulate_trip(VehicleParams{}, dp, rp, 99);
  EXPECT_TRUE(core::bitwise_equal(a, b));
  const auto c = simulate_trip(VehicleParams{}, dp, rp, 100);
  EXPECT_FALSE(core::bitwise_equal(a, c));
}

TEST(Simulate, TraceSpansMatchTenHertzSampling) {
  TripContext ctx;
  ctx.start_ms = 5'000;
  const auto trip = simulate_trip(VehicleParams{}, DriverProfile{}, flat_route(30.0), 3, ctx);
  EXPECT_EQ(trip.end_ms - trip.start_ms, static_cast<std::int64_t>(trip.soc_trace.size()) * 100);
  for (const auto& s : trip.series) EXPECT_EQ(s.size(), 300u);
  EXPECT_EQ(trip.trip_id, core::make_trip_id("v01", 5'000));
}

TEST(Simulate, SocChangeEqualsIntegratedBatteryPower) {
  VehicleParams vp;
  RouteProfile rp = flat_route(1200.0);
  rp.altitude = {{0.0, 200.0}, {3.0, 260.0}, {6.0, 150.0}, {12.0, 240.0}};
  TripContext ctx;
  ctx.initial_soc = 0.7;
  const auto r = simulate_trip_detailed(vp, DriverProfile{}, rp, 4, ctx);
  double energy_j = 0.0;
  for (double p : r.battery_power_w) energy_j += p * 0.1;
  const double drawn_j = (r.initial_soc - r.final_soc) * vp.battery_capacity_kwh * 3.6e6;
  EXPECT_NEAR(drawn_j, energy_j, 1e-9 * std::abs(energy_j));
}

TEST(Simulate, DepletedBatteryStopsTheTrip) {
  TripContext ctx;
  ctx.initial_soc = 0.001;
  const auto r = simulate_trip_detailed(VehicleParams{}, steady_driver(25.0), flat_route(3600.0), 5, ctx);
  EXPECT_TRUE(r.depleted);
  EXPECT_LT(r.trip.soc_trace.size(), 36'000u);
  EXPECT_GE(r.final_soc, 0.0);
}

TEST(Simulate, AgingRaisesConsumptionOfTractionSections) {
  // Steady cruise on the flat never brakes, so every section is traction only.
  VehicleParams fresh;
  VehicleParams aged;
  aged.internal_loss_factor = 1.2;
  const auto dp = steady_driver(22.0);
  const auto rp = flat_route(1800.0);
  const auto a = simulate_trip(fresh, dp, rp, 6);
  const auto b = simulate_trip(aged, dp, rp, 6);
  ASSERT_EQ(a.odo_trace, b.odo_trace);
  for (std::int64_t t0 = a.start_ms; t0 + 360'000 <= a.end_ms; t0 += 360'000) {
    const double ga = oracle_gamma(a, t0, t0 + 360'000);
    const double gb = oracle_gamma(b, t0, t0 + 360'000);
    EXPECT_LT(ga, 0.0);
    EXPECT_GE(std::abs(gb), std::abs(ga));
  }
}

TEST(Simulate, InvalidParametersAreRejected) {
  VehicleParams vp;
  vp.internal_loss_factor = 0.9;
  EXPECT_EQ(error_of([&] { simulate_trip(vp, DriverProfile{}, flat_route(60.0), 1); }), "synthfleet.ParamError");
  vp = VehicleParams{};
  vp.drivetrain_eff = 1.5;
  EXPECT_EQ(error_of([&] { simulate_trip(vp, DriverProfile{}, flat_route(60.0), 1); }), "synthfleet.ParamError");
  RouteProfile rp = flat_route(60.0);
  rp.altitude = {{1.0, 0.0}, {0.5, 0.0}};
  EXPECT_EQ(error_of([&] { simulate_trip(VehicleParams{}, DriverProfile{}, rp, 1); }), "synthfleet.ParamError");
  DriverProfile dp;
  dp.accel_aggressiveness = 0.0;
  EXPECT_EQ(error_of([&] { simulate_trip(VehicleParams{}, dp, flat_route(60.0), 1); }), "synthfleet.ParamError");
}

TEST(Route, AltitudeAndGradeInterpolate) {
  RouteProfile rp;
  rp.altitude = {{0.0, 100.0}, {2.0, 140.0}};
  EXPECT_DOUBLE_EQ(altitude_at(rp, 1.0), 120.0);
  EXPECT_DOUBLE_EQ(altitude_at(rp, 5.0), 140.0);
  EXPECT_DOUBLE_EQ(grade_at(rp, 1.0), 0.02);
  EXPECT_DOUBLE_EQ(grade_at(rp, 3.0), 0.0);
}

TEST(Fleet, DefaultFleetYieldsTwoHundredAcceptedTrips) {
  const auto trips = generate_fleet(10, 20, {}, 7);
  ASSERT_EQ(trips.size(), 200u);
  for (const auto& t : trips) {
    const auto v = core::validate_trip(t, core::SignalCatalog::defaults(), 8 * 60'000);
    EXPECT_TRUE(v.accepted()) << t.trip_id << ": " << v.reason;
  }
  EXPECT_EQ(trips.front().vehicle_id, "v01");
  EXPECT_EQ(trips.back().vehicle_id, "v10");
}

TEST(Fleet, SingleVehicleSingleTrip) {
  EXPECT_EQ(generate_fleet(1, 1, {}, 12345).size(), 1u);
}

TEST(Fleet, IsDeterministic) {
  const auto a = generate_fleet(2, 2, {{"v02", 1.1}}, 3);
  const auto b = generate_fleet(2, 2, {{"v02", 1.1}}, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_TRUE(core::bitwise_equal(a[i], b[i]));
}

TEST(Fleet, AgedTwinDrivesTheSameRoutes) {
  FleetConfig config;
  config.trips_per_vehicle = 3;
  const auto fresh = generate_vehicle_trips(config, 4, 1.0);
  const auto aged = generate_vehicle_trips(config, 4, 1.2);
  ASSERT_EQ(fresh.size(), aged.size());
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    EXPECT_EQ(fresh[i].trip_id, aged[i].trip_id);
    EXPECT_EQ(fresh[i].odo_trace, aged[i].odo_trace);
    EXPECT_EQ(fresh[i].signal(SignalId::VehicleSpeed), aged[i].signal(SignalId::VehicleSpeed));
    EXPECT_LT(aged[i].soc_trace.back().value, fresh[i].soc_trace.back().value);
  }
}

TEST(Fleet, VehicleIdsArePadded) {
  EXPECT_EQ(vehicle_id(0, 10), "v01");
  EXPECT_EQ(vehicle_id(9, 10), "v10");
  EXPECT_EQ(vehicle_id(4, 150), "v005");
}

TEST(Fleet, ConfigTextRoundTrips) {
  FleetConfig config;
  config.n_vehicles = 4;
  config.trips_per_vehicle = 3;
  config.seed = 11;
  config.aging = {{"v03", 1.2}};
  config.min_trip_minutes = 9.5;
  EXPECT_EQ(parse_fleet_config(to_text(config)), config);
  EXPECT_EQ(error_of([] { parse_fleet_config("vehicles = 0\n"); }), "synthfleet.ParamError");
  EXPECT_EQ(error_of([] { parse_fleet_config("colour = red\n"); }), "synthfleet.ParamError");
  EXPECT_EQ(error_of([] { parse_fleet_config("aging = v01=0.5\n"); }), "synthfleet.ParamError");
}

core::Trip two_point_trip(double soc0, double soc1, double odo0, double odo1) {
  core::Trip t;
  t.vehicle_id = "v01";
  t.trip_id = core::make_trip_id("v01", 0);
  t.start_ms = 0;
  t.end_ms = 200;
  t.soc_trace = {{0, soc0}, {100, soc1}};
  t.odo_trace = {{0, odo0}, {100, odo1}};
  return t;
}

TEST(OracleGamma, EqualsSocOverDistance) {
  EXPECT_NEAR(oracle_gamma(two_point_trip(0.80, 0.78, 100.0, 110.0), 0, 100), -0.002, 1e-15);
  EXPECT_EQ(oracle_gamma(two_point_trip(0.5, 0.5, 100.0, 101.0), 0, 100), 0.0);
  EXPECT_EQ(error_of([] { oracle_gamma(two_point_trip(0.8, 0.79, 100.0, 100.0), 0, 100); }),
            "synthfleet.ZeroDistance");
}

TEST(OracleGamma, InterpolatesBetweenSamples) {
  // Halfway between samples both traces sit halfway, so the ratio holds.
  EXPECT_NEAR(oracle_gamma(two_point_trip(0.80, 0.78, 100.0, 110.0), 0, 50), -0.002, 1e-15);
}

}  // namespace
}  // namespace evfleet

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

#include <mutex>
#include <stdexcept>
#include <thread>

#include "evfleet/ingest/codec.hpp"
#include "evfleet/ingest/net.hpp"
#include "evfleet/ingest/recorder.hpp"
#include "evfleet/synthfleet/synthfleet.hpp"
#include "fixtures.hpp"

namespace evfleet {
namespace {

using namespace ingest;
using namespace std::chrono_literals;
using testing::cruise_trip;

core::Trip generated_trip(const std::string& vid, std::int64_t start, double seconds, std::uint64_t seed) {
  synthfleet::TripContext ctx;
  ctx.vehicle_id = vid;
  ctx.start_ms = start;
  synthfleet::RouteProfile rp;
  rp.duration_s = seconds;
  rp.altitude = {{0.0, 420.0}, {0.8, 400.0}, {2.0, 431.0}};
  return synthfleet::simulate_trip({}, {}, rp, seed, ctx);
}

TEST(Replay, PublishCountFollowsSampling) {
  const auto trip = cruise_trip("v01", 1'700'000'000'000, 3600);
  EXPECT_EQ(count_publishes(trip), 17u * 3600u);
  auto partial = trip;
  partial.signal(core::SignalId::LateralAcceleration).clear();
  EXPECT_EQ(count_publishes(partial), 16u * 3600u);
}

TEST(Replay, StreamNamesCoverSignalsAndTraces) {
  EXPECT_EQ(stream_topic_name(0), "acceleration_torque_front");
  EXPECT_EQ(stream_topic_name(15), "soc");
  EXPECT_EQ(stream_topic_name(16), "odometer");
  EXPECT_EQ(find_stream("odometer"), std::optional<std::size_t>(16));
  EXPECT_FALSE(find_stream("odo").has_value());
}

struct Collected {
  std::mutex mu;
  std::vector<core::Trip> trips;
  TripSink sink() {
    return [this](const core::Trip& t) {
      std::lock_guard lock(mu);
      trips.push_back(t);
    };
  }
};

TEST(Recorder, LoopbackReconstructsTheTripBitForBit) {
  Broker broker;
  broker.start({"127.0.0.1", 0});
  Collected got;
  Recorder rec(broker.endpoint(), TopicFilter::parse("fleet/#"), got.sink());
  const auto trip = generated_trip("v03", 1'700'000'123'400, 75.0, 9);
  const auto n = gateway_replay(trip, broker.endpoint());
  EXPECT_EQ(n, count_publishes(trip));
  ASSERT_TRUE(rec.wait_for_samples(n, 10s));
  rec.stop();
  ASSERT_EQ(got.trips.size(), 1u);
  EXPECT_TRUE(core::bitwise_equal(got.trips[0], trip));
  EXPECT_EQ(rec.stats().trips_written, 1u);
  EXPECT_FALSE(rec.connection_lost());
}

TEST(Recorder, PacedReplayTakesRoughlyTheScaledDuration) {
  Broker broker;
  broker.start({"127.0.0.1", 0});
  Collected got;
  Recorder rec(broker.endpoint(), TopicFilter::parse("fleet/#"), got.sink());
  const auto trip = generated_trip("v01", 0, 10.0, 3);  // 10 s of driving
  const auto t0 = std::chrono::steady_clock::now();
  gateway_replay(trip, broker.endpoint(), 50.0);
  const auto took = std::chrono::steady_clock::now() - t0;
  EXPECT_GE(took, 150ms);
  EXPECT_LT(took, 5s);
  ASSERT_TRUE(rec.wait_for_samples(count_publishes(trip), 10s));
  rec.stop();
  ASSERT_EQ(got.trips.size(), 1u);
  EXPECT_TRUE(core::bitwise_equal(got.trips[0], trip));
}

TEST(Recorder, NoMessagesMeansNoTrips) {
  Broker broker;
  broker.start({"127.0.0.1", 0});
  Collected got;
  Recorder rec(broker.endpoint(), TopicFilter::parse("fleet/#"), got.sink());
  rec.stop();
  EXPECT_TRUE(got.trips.empty());
  EXPECT_EQ(rec.stats().trips_completed, 0u);
}

TEST(Recorder, NoticesWhenTheBrokerGoesAway) {
  Broker broker;
  broker.start({"127.0.0.1", 0});
  Collected got;
  Recorder rec(broker.endpoint(), TopicFilter::parse("fleet/#"), got.sink());
  broker.stop();
  for (int i = 0; i < 50 && !rec.connection_lost(); ++i) std::this_thread::sleep_for(20ms);
  EXPECT_TRUE(rec.connection_lost());
}

void feed(TripAssembler& a, const core::Trip& trip) {
  for (std::size_t s = 0; s < core::kSignalCount; ++s) {
    for (const auto& v : trip.series[s]) a.on_sample(trip.vehicle_id, s, v);
  }
  for (const auto& v : trip.soc_trace) a.on_sample(trip.vehicle_id, core::kSignalCount, v);
  for (const auto& v : trip.odo_trace) a.on_sample(trip.vehicle_id, core::kSignalCount + 1, v);
}

TEST(Assembler, TenMinuteSilenceSplitsTrips) {
  Collected got;
  TripAssembler a(got.sink());
  const auto first = cruise_trip("v01", 1'700'000'000'000, 600);
  const auto second = cruise_trip("v01", first.end_ms + 600'000, 600);
  feed(a, first);
  feed(a, second);
  a.flush();
  ASSERT_EQ(got.trips.size(), 2u);
  EXPECT_TRUE(core::bitwise_equal(got.trips[0], first));
  EXPECT_TRUE(core::bitwise_equal(got.trips[1], second));
}

TEST(Assembler, VehiclesAreAssembledIndependently) {
  Collected got;
  TripAssembler a(got.sink());
  feed(a, cruise_trip("v01", 1'000'000, 50));
  feed(a, cruise_trip("v02", 1'000'000, 70));
  a.flush();
  ASSERT_EQ(got.trips.size(), 2u);
  EXPECT_EQ(a.stats().trips_completed, 2u);
}

TEST(Assembler, ForeignTopicsAndBadPayloadsAreIgnored) {
  Collected got;
  TripAssembler a(got.sink());
  const auto p = encode_telemetry({0, 1.0});
  a.on_publish({"fleet/v01/signal/warp_drive", {p.begin(), p.end()}});
  a.on_publish({"other/v01/signal/soc", {p.begin(), p.end()}});
  a.on_publish({"fleet/v01/signal/soc", {1, 2, 3}});
  a.flush();
  EXPECT_EQ(a.stats().samples_ignored, 3u);
  EXPECT_TRUE(got.trips.empty());
}

TEST(Assembler, FailedWritesAreRetriedThenDroppedWhenFull) {
  int failures_left = 2;
  std::vector<core::Trip> written;
  RecorderOptions opts;
  opts.max_buffered_samples = 17 * 50;
  TripAssembler a(
      [&](const core::Trip& t) {
        if (failures_left > 0) {
          --failures_left;
          throw std::runtime_error("disk full");
        }
        written.push_back(t);
      },
      opts);
  feed(a, cruise_trip("v01", 1'000'000, 50));
  a.flush();  // delivery and the retry both fail, trip stays buffered
  EXPECT_EQ(a.buffered_trips(), 1u);
  a.flush();
  EXPECT_EQ(written.size(), 1u);
  EXPECT_EQ(a.stats().write_failures, 2u);

  failures_left = 100;
  feed(a, cruise_trip("v01", 9'000'000, 50));
  a.flush();
  feed(a, cruise_trip("v01", 19'000'000, 50));
  a.flush();
  EXPECT_EQ(a.buffered_trips(), 1u);
  EXPECT_EQ(a.stats().dropped_data, 17u * 50u);
}

}  // namespace
}  // namespace evfleet
